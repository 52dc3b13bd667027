"""
counting.py — Función de conteo de Nevanlinna generalizada.

    N_φ,α(w) = Σ_{z : φ(z) = w} (1 - |z|²)^α

Rutas por variante:
    univalent-closed-form   Dilation, Automorphism, Lens, polinomio grado 1
    polynomial-roots        Polynomial (valores propios de la companera,
                            o Aberth-Ehrlich), con multiplicidad
    exp-series              SingularExp (serie en k con cola por zeta de Hurwitz)

Además:
    counting_grid           versión vectorizada para cuadratura
    cov_residual            cambio de variable ∫ f∘φ |φ′|² dA_α = ∫ f N dA
    submean_constant        evidencia de submedia sobre discos euclidianos
    conjugation_band_check  identidad de conjugación con φ_β

Uso:
    from dphi.core.counting import counting
    sample = counting(parse_map_spec("poly:0,0,1"), SpaceParams(0.5), 0.25)
    sample.value   # 1.7320...
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.special import zeta

from dphi.config import CountingConfig
from dphi.core.errors import (
    ConvergenceError,
    DivergentSeriesError,
    DomainError,
)
from dphi.core.maps import (
    Automorphism,
    Dilation,
    Lens,
    Polynomial,
    SelfMap,
    SingularExp,
    eval_derivative,
    eval_map,
    value_at_origin,
)
from dphi.core.quadrature import DiskQuadrature, integrate_disk
from dphi.core.space import SpaceParams
from dphi.utils.logger import get_logger

logger = get_logger("dphi.counting")

ROUTE_UNIVALENT = "univalent-closed-form"
ROUTE_POLYNOMIAL = "polynomial-roots"
ROUTE_EXP = "exp-series"

# Bloques para los valores propios en lote (memoria acotada)
_BATCH = 16384
# Términos máximos de la expansión binomial de la cola
_MAX_BINOMIAL_TERMS = 200


@dataclass(frozen=True)
class CountingSample:
    """
    Una evaluación de N_φ,α(w).

    Campos:
        w: Punto del disco (w ≠ φ(0)).
        value: N_φ,α(w) ≥ 0.
        route: Ruta usada (ver constantes ROUTE_*).
        boundary_ambiguous: Alguna raíz cayo a menos de boundary_tol de |z| = 1.
        preimages: Preimagenes dentro del disco que contribuyeron.
    """

    w: complex
    value: float
    route: str
    boundary_ambiguous: bool = False
    preimages: tuple[complex, ...] = ()

    def to_record(self) -> dict:
        return {
            "w": self.w,
            "value": self.value,
            "route": self.route,
            "boundary_ambiguous": self.boundary_ambiguous,
            "preimages": list(self.preimages),
        }


def _settings(settings: CountingConfig | None) -> CountingConfig:
    return settings if settings is not None else CountingConfig()


def _check_w(m: SelfMap, w: complex) -> complex:
    w = complex(w)
    if not abs(w) < 1.0:
        raise DomainError(f"Se requiere |w| < 1, recibido |w| = {abs(w)}")
    if abs(w - value_at_origin(m)) <= 1e-15:
        raise DomainError("N_φ,α no se evalúa en w = φ(0)")
    return w


def _weight(z: np.ndarray, alpha: float) -> np.ndarray:
    return np.clip(1.0 - np.abs(z) ** 2, 0.0, None) ** alpha


# ============================================================
# Raíces de polinomios
# ============================================================

def _companion_batch(monic_low: np.ndarray) -> np.ndarray:
    """
    Matrices companeras en lote.

    Args:
        monic_low: (B, d) coeficientes a_0..a_{d-1} del polinomio monico
            z^d + a_{d-1} z^{d-1} + ... + a_0.
    """
    b, d = monic_low.shape
    mats = np.zeros((b, d, d), dtype=np.complex128)
    if d > 1:
        idx = np.arange(d - 1)
        mats[:, idx + 1, idx] = 1.0
    mats[:, :, -1] = -monic_low
    return mats


def _aberth(coeffs: np.ndarray, max_iter: int, tol: float = 1e-14) -> np.ndarray:
    """Aberth-Ehrlich para un polinomio (coeficientes de grado bajo a alto)."""
    d = coeffs.size - 1
    poly = np.polynomial.Polynomial(coeffs)
    dpoly = poly.deriv()
    # Cota de Cauchy para el radio inicial; ángulos desfasados
    radius = 1.0 + float(np.max(np.abs(coeffs[:-1] / coeffs[-1])))
    z = 0.5 * radius * np.exp(1j * (2.0 * np.pi * np.arange(d) / d + 0.4))
    for _ in range(max_iter):
        ratio = poly(z) / dpoly(z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv_sum = np.sum(1.0 / diff, axis=1) - 1.0
        step = ratio / (1.0 - ratio * inv_sum)
        z = z - step
        if np.max(np.abs(step)) <= tol * max(1.0, float(np.max(np.abs(z)))):
            return z
    raise ConvergenceError(
        f"Aberth no convergió en {max_iter} iteraciones",
        last_value=z,
        residual=float(np.max(np.abs(poly(z)))),
    )


def polynomial_roots(
    coeffs: Iterable[complex],
    method: str = "companion",
    max_iter: int = 500,
) -> tuple[np.ndarray, float]:
    """
    Todas las raíces (con multiplicidad) de Σ c_k z^k.

    Returns:
        (raíces, residuo relativo máximo |p(z)| / Σ|c_k||z|^k).
    """
    c = np.asarray(list(coeffs), dtype=np.complex128)
    while c.size > 1 and c[-1] == 0:
        c = c[:-1]
    if c.size < 2:
        raise DomainError("Se necesita grado >= 1 para buscar raíces")

    if method == "companion":
        mats = _companion_batch((c[:-1] / c[-1])[None, :])
        roots = np.linalg.eigvals(mats)[0]
    elif method == "aberth":
        roots = _aberth(c, max_iter)
    else:
        raise DomainError(f"Método de raíces desconocido: '{method}'")

    poly = np.polynomial.Polynomial(c)
    scale = np.polynomial.Polynomial(np.abs(c))(np.abs(roots))
    residual = float(np.max(np.abs(poly(roots)) / np.maximum(scale, 1e-300)))
    return roots, residual


# ============================================================
# Rutas escalares
# ============================================================

def counting_univalent(
    m: SelfMap,
    p: SpaceParams,
    w: complex,
) -> CountingSample:
    """
    N = (1 - |φ^{-1}(w)|²)^α si w ∈ φ(D), si no 0.

    Inversas cerradas: Dilation z = w/r, Automorphism (involución),
    Lens (lente inversa de exponente 1/δ), polinomio de grado 1.
    """
    if not m.univalent:
        raise DomainError(f"La variante '{m.kind}' no es univalente")
    w = _check_w(m, w)

    if isinstance(m, (Dilation, Automorphism, Lens)):
        with np.errstate(over="ignore", invalid="ignore"):
            z = complex(m.inverse(np.complex128(w)))
    elif isinstance(m, Polynomial) and m.degree == 1:
        z = (w - m.coeffs[0]) / m.coeffs[1]
    elif isinstance(m, Polynomial):
        return counting_polynomial(m, p, w)
    else:
        raise DomainError(f"Sin inversa cerrada para '{m.kind}'")

    if np.isnan(z) or not abs(z) < 1.0:
        return CountingSample(w=w, value=0.0, route=ROUTE_UNIVALENT)
    value = float((1.0 - abs(z) ** 2) ** p.alpha)
    return CountingSample(w=w, value=value, route=ROUTE_UNIVALENT, preimages=(z,))


def counting_polynomial(
    m: Polynomial,
    p: SpaceParams,
    w: complex,
    settings: CountingConfig | None = None,
) -> CountingSample:
    """
    Σ (1 - |z_k|²)^α sobre las raíces de φ(z) - w en el disco,
    contadas con multiplicidad.

    Raíces a menos de boundary_tol del circulo se excluyen y la muestra
    queda marcada como ambigua.
    """
    cfg = _settings(settings)
    if not isinstance(m, Polynomial) or m.degree < 1:
        raise DomainError("counting_polynomial requiere un polinomio de grado >= 1")
    w = _check_w(m, w)

    shifted = np.array(m.coeffs, dtype=np.complex128)
    shifted[0] -= w
    roots, residual = polynomial_roots(shifted, cfg.root_method, cfg.aberth_max_iter)
    logger.debug(f"raíces de φ(z)-w en w={w:.6g}: residuo {residual:.2e}")

    moduli = np.abs(roots)
    ambiguous = np.abs(moduli - 1.0) < cfg.boundary_tol
    inside = (moduli < 1.0) & ~ambiguous
    if ambiguous.any():
        logger.warning(f"Raíz a menos de {cfg.boundary_tol:g} del circulo unitario (w={w:.6g})")

    value = float(np.sum(_weight(roots[inside], p.alpha)))
    return CountingSample(
        w=w,
        value=value,
        route=ROUTE_POLYNOMIAL,
        boundary_ambiguous=bool(ambiguous.any()),
        preimages=tuple(complex(z) for z in roots[inside]),
    )


# ============================================================
# Mapeo exponencial singular
# ============================================================

def _binomial_tail(
    scale: float,
    ratio: float,
    alpha: float,
    start: float,
    rel_tol: float,
    reference: float,
) -> float:
    """
    Σ_{k≥0} scale·(k+start)^{-2α}·(1 + ratio/(k+start)²)^{-α}
    vía Σ_j binom(-α, j)·ratio^j·ζ(2α+2j, start).

    Requiere ratio/start² ≤ 1/4 para que la expansión converja rápido.
    """
    total = 0.0
    coef = 1.0
    for j in range(_MAX_BINOMIAL_TERMS):
        term = coef * ratio ** j * float(zeta(2.0 * alpha + 2.0 * j, start))
        total += term
        if abs(term) * scale < 1e-3 * rel_tol * reference:
            break
        coef *= (-alpha - j) / (j + 1.0)
    return scale * total


def _check_exp_args(p: SpaceParams, w: complex) -> float:
    if p.alpha <= 0.5:
        raise DivergentSeriesError(
            f"La serie de conteo del mapeo exponencial diverge para alpha={p.alpha} <= 1/2"
        )
    w = complex(w)
    if w == 0:
        raise DomainError("counting_exp no acepta w = 0")
    if not abs(w) < 1.0:
        raise DomainError(f"Se requiere 0 < |w| < 1, recibido |w| = {abs(w)}")
    return float(np.log(abs(w)))


def _exp_sum(log_abs: float, alpha: float, shift: float, two_sided: bool, rel_tol: float) -> float:
    """
    Σ_k (A / (B + C (k + shift)²))^α con A = -4L, B = (L-1)², C = 4π².

    k recorre 0..∞ (two_sided=False, shift=0) o todo ℤ (two_sided=True).
    Los primeros K términos se suman directo y la cola con zeta de Hurwitz.
    """
    a_num = -4.0 * log_abs
    b = (log_abs - 1.0) ** 2
    c = 4.0 * np.pi ** 2
    ratio = b / c

    k_cut = int(np.ceil(2.0 * np.sqrt(ratio))) + 16
    scale = (a_num / c) ** alpha

    k = np.arange(0, k_cut + 1, dtype=float)
    head = np.sum((a_num / (b + c * (k + shift) ** 2)) ** alpha)
    if two_sided:
        k_neg = np.arange(1, k_cut + 1, dtype=float)
        head += np.sum((a_num / (b + c * (k_neg - shift) ** 2)) ** alpha)

    tail = _binomial_tail(scale, ratio, alpha, k_cut + 1 + shift, rel_tol, head)
    if two_sided:
        tail += _binomial_tail(scale, ratio, alpha, k_cut + 1 - shift, rel_tol, head)
    return float(head + tail)


def counting_exp(
    p: SpaceParams,
    w: complex,
    rel_tol: float = 1e-10,
) -> CountingSample:
    """
    Serie cerrada del mapeo exponencial (k ≥ 0, argumento de w ignorado):
        Σ_{k≥0} (-4 log|w| / ((log|w| - 1)² + 4π²k²))^α

    Raises:
        DivergentSeriesError: alpha <= 1/2.
        DomainError: w = 0 o |w| >= 1.
    """
    log_abs = _check_exp_args(p, w)
    value = _exp_sum(log_abs, p.alpha, 0.0, two_sided=False, rel_tol=rel_tol)
    return CountingSample(w=complex(w), value=value, route=ROUTE_EXP)


def counting_exp_full(
    p: SpaceParams,
    w: complex,
    rel_tol: float = 1e-10,
) -> CountingSample:
    """
    Conjunto completo de preimagenes de exp((z+1)/(z-1)) = w.

    (z+1)/(z-1) = log|w| + i(arg w + 2πk), k ∈ ℤ, y cada preimagen
    aporta (-4 log|w| / ((log|w| - 1)² + (arg w + 2πk)²))^α.
    """
    log_abs = _check_exp_args(p, w)
    shift = float(np.angle(complex(w))) / (2.0 * np.pi)
    value = _exp_sum(log_abs, p.alpha, shift, two_sided=True, rel_tol=rel_tol)
    return CountingSample(w=complex(w), value=value, route=ROUTE_EXP)


# ============================================================
# Despachador y versión vectorizada
# ============================================================

def counting(
    m: SelfMap,
    p: SpaceParams,
    w: complex,
    settings: CountingConfig | None = None,
) -> CountingSample:
    """Elige la ruta según la variante de m."""
    cfg = _settings(settings)
    if isinstance(m, SingularExp):
        _check_w(m, w)
        return counting_exp(p, w, cfg.exp_rel_tol)
    if isinstance(m, Polynomial) and m.degree >= 2:
        return counting_polynomial(m, p, w, cfg)
    return counting_univalent(m, p, w)


def _polynomial_grid(
    m: Polynomial,
    p: SpaceParams,
    ws: np.ndarray,
    boundary_tol: float,
) -> tuple[np.ndarray, np.ndarray]:
    c = np.array(m.coeffs, dtype=np.complex128)
    lead = c[-1]
    flat = ws.reshape(-1)
    values = np.zeros(flat.size)
    flags = np.zeros(flat.size, dtype=bool)
    for start in range(0, flat.size, _BATCH):
        chunk = flat[start : start + _BATCH]
        low = np.broadcast_to(c[:-1] / lead, (chunk.size, c.size - 1)).copy()
        low[:, 0] -= chunk / lead
        roots = np.linalg.eigvals(_companion_batch(low))
        moduli = np.abs(roots)
        ambiguous = np.abs(moduli - 1.0) < boundary_tol
        inside = (moduli < 1.0) & ~ambiguous
        contrib = np.where(inside, _weight(np.where(inside, roots, 0.0), p.alpha), 0.0)
        values[start : start + chunk.size] = contrib.sum(axis=1)
        flags[start : start + chunk.size] = ambiguous.any(axis=1)
    return values.reshape(ws.shape), flags.reshape(ws.shape)


def counting_grid(
    m: SelfMap,
    p: SpaceParams,
    ws: np.ndarray,
    settings: CountingConfig | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """
    N_φ,α sobre un arreglo de puntos.

    No aplica la exclusión de w = φ(0) (la cuadratura nunca cae ahí en
    la práctica y la fórmula sigue definida).

    Returns:
        (valores, banderas de ambiguedad en la frontera), misma forma que ws.
    """
    cfg = _settings(settings)
    ws = np.asarray(ws, dtype=np.complex128)
    no_flags = np.zeros(ws.shape, dtype=bool)

    if isinstance(m, SingularExp):
        moduli = np.abs(ws)
        values = np.zeros(ws.shape)
        for radius in np.unique(moduli):
            if radius == 0.0:
                continue
            values[moduli == radius] = counting_exp(p, radius, cfg.exp_rel_tol).value
        return values, no_flags

    if isinstance(m, Polynomial) and m.degree >= 2:
        return _polynomial_grid(m, p, ws, cfg.boundary_tol)

    if isinstance(m, Polynomial):
        if m.degree == 0:
            return np.zeros(ws.shape), no_flags
        z = (ws - m.coeffs[0]) / m.coeffs[1]
    elif isinstance(m, (Dilation, Automorphism, Lens)):
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            z = m.inverse(ws)
    else:
        raise DomainError(f"Sin ruta de conteo para '{m.kind}'")

    with np.errstate(invalid="ignore"):
        inside = np.abs(z) < 1.0
    values = np.where(inside, _weight(np.where(inside, z, 0.0), p.alpha), 0.0)
    return values, no_flags


# ============================================================
# Cambio de variable y evidencias
# ============================================================

def cov_residual(
    m: SelfMap,
    p: SpaceParams,
    test_exponent: int,
    q: DiskQuadrature,
    settings: CountingConfig | None = None,
) -> float:
    """
    Residuo relativo |LHS - RHS| / RHS del cambio de variable con
    f(w) = (1 - |w|²)^m:

        LHS = ∫ f(φ(z)) |φ′(z)|² dA_α(z)
        RHS = ∫ f(w) N_φ,α(w) dA(w)

    Para dilataciones el lado derecho usa una regla partida en |w| = |r|
    (N tiene un quiebre ahí).
    """
    if not isinstance(m, (Dilation, Polynomial)):
        raise DomainError("cov_residual solo acepta Dilation o Polynomial")
    if isinstance(m, Polynomial) and m.degree < 1:
        raise DomainError("cov_residual requiere grado >= 1")
    if test_exponent < 0:
        raise DomainError(f"test_exponent debe ser >= 0, recibido {test_exponent}")

    def f(w: np.ndarray) -> np.ndarray:
        return (1.0 - np.abs(w) ** 2) ** test_exponent

    def lhs_integrand(z: np.ndarray) -> np.ndarray:
        return f(eval_map(m, z)) * np.abs(eval_derivative(m, z)) ** 2

    def rhs_integrand(w: np.ndarray) -> np.ndarray:
        values, _ = counting_grid(m, p, w, settings)
        return f(w) * values

    lhs = integrate_disk(lhs_integrand, p.alpha, q)
    q_rhs = q
    if isinstance(m, Dilation):
        q_rhs = DiskQuadrature.build(
            radial=q.radii.size,
            angular=q.angular,
            cluster_exponent=q.cluster_exponent,
            split=abs(m.r),
        )
    rhs = integrate_disk(rhs_integrand, "plain", q_rhs)
    residual = abs(lhs - rhs) / rhs
    logger.debug(f"COV {m.kind}, m={test_exponent}: LHS={lhs:.12g} RHS={rhs:.12g}")
    return float(residual)


def submean_constant(
    m: SelfMap,
    p: SpaceParams,
    ws: Iterable[complex],
    delta: float = 0.5,
    q_local: DiskQuadrature | None = None,
    settings: CountingConfig | None = None,
) -> float:
    """
    max_w N(w) / (promedio de N sobre {|z - w| < δ(1 - |w|)}).

    Los promedios usan una regla polar local sin agrupamiento.
    """
    rule = q_local if q_local is not None else DiskQuadrature.build(32, 64, 1.0)
    worst = 0.0
    for w in ws:
        w = complex(w)
        radius = delta * (1.0 - abs(w))
        local = w + radius * rule.nodes
        values, _ = counting_grid(m, p, local, settings)
        mean = float(np.sum(rule.radial_weights * values.mean(axis=1)))
        center = counting(m, p, w, settings).value
        if mean > 0.0:
            worst = max(worst, center / mean)
        elif center > 0.0:
            return float("inf")
    return worst


def conjugation_band_check(
    m: Polynomial,
    beta: complex,
    p: SpaceParams,
    ws: Iterable[complex],
    settings: CountingConfig | None = None,
) -> dict:
    """
    Compara N_φ,α(φ_β(w)) / (1-|φ_β(w)|²)^{α+2} contra
    N_{φ_β∘φ},α(w) / (1-|w|²)^{α+2}.

    El lado derecho se calcula de forma independiente con las raíces de
    (w·conj(β) - 1)·φ(z) + β - w. El cociente debe caer en la banda
        [(1-|β|)^{2(α+2)}, (1+|β|)^{2(α+2)}] / (1-|β|²)^{α+2}.
    """
    cfg = _settings(settings)
    beta = complex(beta)
    auto = Automorphism(beta)
    a2 = p.alpha + 2.0
    denom = (1.0 - abs(beta) ** 2) ** a2
    low = (1.0 - abs(beta)) ** (2.0 * a2) / denom
    high = (1.0 + abs(beta)) ** (2.0 * a2) / denom

    ratios: list[float] = []
    for w in ws:
        w = complex(w)
        target = complex(auto.inverse(np.complex128(w)))
        left_n = counting(m, p, target, cfg).value
        left = left_n / (1.0 - abs(target) ** 2) ** a2

        coeffs = (w * np.conj(beta) - 1.0) * np.array(m.coeffs, dtype=np.complex128)
        coeffs[0] += beta - w
        roots, _ = polynomial_roots(coeffs, cfg.root_method, cfg.aberth_max_iter)
        right_n = float(np.sum(_weight(roots[np.abs(roots) < 1.0], p.alpha)))
        right = right_n / (1.0 - abs(w) ** 2) ** a2

        if right > 0.0 and left > 0.0:
            ratios.append(left / right)

    ok = bool(ratios) and all(low * (1 - 1e-9) <= r <= high * (1 + 1e-9) for r in ratios)
    return {
        "band": (low, high),
        "min_ratio": min(ratios) if ratios else None,
        "max_ratio": max(ratios) if ratios else None,
        "samples": len(ratios),
        "ok": ok,
    }
