"""
operator.py — El operador D_φ f = f′∘φ sobre D_α.

Contiene:
- Base ortonormal e_n = (n+1)^{(α-1)/2} z^n y acción apply(m, f)
- Matriz truncada en la base {e_n} y norma por power iteration
- Norma cerrada de la dilatación φ(z) = rz
- Norma de Hilbert-Schmidt por suma en la base, por cuadratura de la
  integral ∫|φ′|²(1-|φ|²)^{-α-4} dA_α y por serie de coeficientes de la
  misma integral
- Proyección de cola R_n, cotas de cola de derivadas, funciones de
  prueba f_w

Uso:
    from dphi.core.operator import build_matrix, operator_norm
    mat = build_matrix(Dilation(0.5), SpaceParams(0.5), 60, 60)
    operator_norm(mat)   # ≈ 0.9036
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy.special import beta as beta_fn

from dphi.core.errors import ConvergenceError, DomainError, ResourceLimitError
from dphi.core.maps import (
    Dilation,
    Polynomial,
    SelfMap,
    as_series,
    eval_derivative,
    eval_map,
)
from dphi.core.quadrature import DiskQuadrature, integrate_disk
from dphi.core.series import (
    DEFAULT_MAX_ORDER,
    PowerSeries,
    compose,
    derive,
    evaluate,
    integrate_from_zero,
    power,
)
from dphi.core.space import SpaceParams, dirichlet_norm
from dphi.utils.logger import get_logger

logger = get_logger("dphi.operator")

DEFAULT_MAX_ENTRIES = 4_000_000
DEFAULT_TEST_ORDER = 256
# Orden de f_w: al menos TEST_ORDER_FACTOR / (1 - |w|) coeficientes
TEST_ORDER_FACTOR = 40
# hs_norm_basis reporta avance desde este N
HS_PROGRESS_MIN_TERMS = 500


# ============================================================
# Tipos de resultado
# ============================================================

@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """
    Matriz (M+1)×(N+1) de D_φ: entries[m, n] = <D_φ e_n, e_m>.

    Campos:
        entries: Arreglo complejo.
        alpha: Parámetro del espacio.
        map: Auto-mapeo φ.
        col_order: N (último índice de columna).
        row_order: M (último índice de fila).
    """

    entries: np.ndarray
    alpha: float
    map: SelfMap
    col_order: int
    row_order: int


@dataclass(frozen=True)
class NormEstimate:
    """Resultado de power iteration: valor, iteraciones y si convergió."""

    value: float
    iterations: int
    converged: bool = True


@dataclass(frozen=True)
class ClosedFormNormResult:
    """
    Norma cerrada de D_φ para φ(z) = rz.

    x0 es el punto crítico de f(x) = x^{(3-α)/2}(x+1)^{(α-1)/2}|r|^{x-1};
    eta ∈ {floor(x0), floor(x0)+1} y norm = f(eta).
    """

    x0: float
    eta: int
    norm: float
    f_at_floor: float
    f_at_floor_plus_one: float


@dataclass(frozen=True)
class HSNormResult:
    """Suma de Hilbert-Schmidt en la base; last_term indica truncación."""

    value: float
    last_term: float
    terms: int


# ============================================================
# Base y acción
# ============================================================

def basis_e(n: int, p: SpaceParams) -> PowerSeries:
    """e_n = (n+1)^{(α-1)/2} z^n, de norma 1 en D_α."""
    if n < 0:
        raise DomainError(f"Índice de base negativo: {n}")
    return PowerSeries.monomial(n, (n + 1.0) ** ((p.alpha - 1.0) / 2.0))


def apply(
    m: SelfMap,
    f: PowerSeries,
    out_order: int,
    max_order: int | None = None,
) -> PowerSeries:
    """D_φ f = f′∘φ truncada en out_order."""
    phi = as_series(m, out_order)
    return compose(derive(f), phi, out_order, max_order)


def _phi_coefficients(m: SelfMap, order: int) -> np.ndarray:
    """Coeficientes de φ hasta `order`, sin ceros finales (convoluciones cortas)."""
    c = np.array(as_series(m, order).coeffs)
    last = np.flatnonzero(c)
    return c[: last[-1] + 1] if last.size else c[:1]


def _image_columns(m: SelfMap, p: SpaceParams, n_max: int, order: int) -> Iterator[tuple[int, np.ndarray]]:
    """
    Genera (n, coeficientes monomiales de D_φ e_n) para n = 1..n_max.

    D_φ e_n = n (n+1)^{(α-1)/2} φ^{n-1}; las potencias se acumulan de
    forma incremental en vez de componer columna por columna.
    """
    phi = _phi_coefficients(m, order)
    phi_power = np.zeros(order + 1, dtype=np.complex128)
    phi_power[0] = 1.0
    for n in range(1, n_max + 1):
        if n > 1:
            phi_power = np.convolve(phi_power, phi)[: order + 1]
        yield n, n * (n + 1.0) ** ((p.alpha - 1.0) / 2.0) * phi_power


def build_matrix(
    m: SelfMap,
    p: SpaceParams,
    N: int,
    M: int,
    max_entries: int = DEFAULT_MAX_ENTRIES,
    max_order: int | None = None,
) -> OperatorMatrix:
    """
    Matriz truncada de D_φ en la base {e_n}.

    entry[m, n] = (m+1)^{(1-α)/2} · (coeficiente m de D_φ e_n).

    Raises:
        ResourceLimitError: (N+1)(M+1) > max_entries, o N o M por encima
            de max_order.
    """
    if N < 0 or M < 0:
        raise DomainError(f"Órdenes inválidos N={N}, M={M}")
    cap = DEFAULT_MAX_ORDER if max_order is None else max_order
    if max(N, M) > cap:
        raise ResourceLimitError(f"Truncación N={N}, M={M} excede series.max_order={cap}")
    if (N + 1) * (M + 1) > max_entries:
        raise ResourceLimitError(
            f"Matriz {M + 1}x{N + 1} excede operator.max_matrix_entries={max_entries}"
        )

    entries = np.zeros((M + 1, N + 1), dtype=np.complex128)
    row_scale = np.arange(1, M + 2, dtype=float) ** ((1.0 - p.alpha) / 2.0)
    for n, coeffs in _image_columns(m, p, N, M):
        entries[:, n] = row_scale * coeffs

    logger.debug(f"Matriz de D_φ {M + 1}x{N + 1} construida para {m.kind}")
    return OperatorMatrix(entries=entries, alpha=p.alpha, map=m, col_order=N, row_order=M)


# ============================================================
# Norma de operador
# ============================================================

def power_iteration(
    entries: np.ndarray,
    tol: float = 1e-12,
    max_iter: int = 200_000,
) -> NormEstimate:
    """
    Mayor valor singular por power iteration sobre G = AᴴA.

    Arranque determinista (vector de unos normalizado); para cuando el
    cambio relativo del cociente de Rayleigh baja de tol.

    Raises:
        ConvergenceError: Con el último iterado en last_value.
    """
    if tol <= 0:
        raise DomainError(f"tol debe ser > 0, recibido {tol}")
    gram = entries.conj().T @ entries
    n = gram.shape[0]
    v = np.ones(n, dtype=np.complex128) / math.sqrt(n)
    rayleigh = 0.0
    change = float("inf")

    for it in range(1, max_iter + 1):
        u = gram @ v
        new = float(np.real(np.vdot(v, u)))
        norm_u = float(np.linalg.norm(u))
        if norm_u == 0.0:
            return NormEstimate(value=0.0, iterations=it)
        v = u / norm_u
        change = abs(new - rayleigh) / max(abs(new), 1e-300)
        rayleigh = new
        if change < tol:
            return NormEstimate(value=math.sqrt(max(rayleigh, 0.0)), iterations=it)

    raise ConvergenceError(
        f"Power iteration no convergió en {max_iter} iteraciones",
        last_value=math.sqrt(max(rayleigh, 0.0)),
        residual=change,
    )


def operator_norm(
    mat: OperatorMatrix,
    tol: float = 1e-12,
    max_iter: int = 200_000,
) -> float:
    """‖D_φ‖ de la matriz truncada (ver power_iteration)."""
    estimate = power_iteration(mat.entries, tol, max_iter)
    logger.debug(f"power iteration: {estimate.iterations} iteraciones, valor {estimate.value:.12g}")
    return estimate.value


def _dilation_profile(x: float, alpha: float, log_r: float) -> float:
    if x <= 0:
        return 0.0
    return math.exp(
        (3.0 - alpha) / 2.0 * math.log(x)
        + (alpha - 1.0) / 2.0 * math.log(x + 1.0)
        + (x - 1.0) * log_r
    )


def closed_form_dilation_norm(r: complex, p: SpaceParams) -> ClosedFormNormResult:
    """
    ‖D_φ‖ exacta para φ(z) = rz.

    x0 es la raíz positiva de L x² + (1+L) x + (3-α)/2 = 0, L = log|r|.
    Se comparan f(floor(x0)) y f(floor(x0)+1). Si x0 < 1 entonces
    floor(x0) = 0, f(0) = 0 y la norma es f(1) = 2^{(α-1)/2}.
    """
    modulus = abs(complex(r))
    if not 0.0 < modulus < 1.0:
        raise DomainError(f"Se requiere 0 < |r| < 1, recibido |r| = {modulus}")
    a = p.alpha
    log_r = math.log(modulus)
    disc = (1.0 + log_r) ** 2 - 2.0 * (3.0 - a) * log_r
    x0 = (-(1.0 + log_r) - math.sqrt(disc)) / (2.0 * log_r)

    k = math.floor(x0)
    f_k = _dilation_profile(k, a, log_r)
    f_k1 = _dilation_profile(k + 1, a, log_r)
    eta = k + 1 if f_k < f_k1 else k
    return ClosedFormNormResult(
        x0=x0,
        eta=eta,
        norm=max(f_k, f_k1),
        f_at_floor=f_k,
        f_at_floor_plus_one=f_k1,
    )


# ============================================================
# Hilbert-Schmidt
# ============================================================

def _default_image_order(m: SelfMap, N: int) -> int:
    if isinstance(m, Dilation):
        return max(N - 1, 0)
    if isinstance(m, Polynomial):
        return max(m.degree * (N - 1), 0)
    return max(4 * N, 256)


def hs_norm_basis(
    m: SelfMap,
    p: SpaceParams,
    N: int,
    out_order: int | None = None,
    max_order: int | None = None,
) -> HSNormResult:
    """
    sqrt(Σ_{n=1}^{N} ‖D_φ e_n‖²).

    Para polinomios y dilataciones el orden por defecto hace exacta cada
    imagen; para el resto se trunca en max(4N, 256) y el costo crece
    como N³, así que desde HS_PROGRESS_MIN_TERMS términos se reporta
    avance por décimos.

    Raises:
        ResourceLimitError: Orden de las imágenes por encima de max_order.
    """
    if N < 1:
        raise DomainError(f"N debe ser >= 1, recibido {N}")
    order = _default_image_order(m, N) if out_order is None else out_order
    cap = DEFAULT_MAX_ORDER if max_order is None else max_order
    if order > cap:
        raise ResourceLimitError(
            f"Imágenes de orden {order} exceden series.max_order={cap}; baja N u out_order"
        )
    weights = np.arange(1, order + 2, dtype=float) ** (1.0 - p.alpha)
    stride = max(N // 10, 1) if N >= HS_PROGRESS_MIN_TERMS else 0
    total = 0.0
    last = 0.0
    for n, coeffs in _image_columns(m, p, N, order):
        last = float(np.sum(weights * np.abs(coeffs) ** 2))
        total += last
        if stride and n % stride == 0:
            logger.step(n, N, f"términos de Hilbert-Schmidt ({m.kind}, orden {order})")
    return HSNormResult(value=math.sqrt(total), last_term=math.sqrt(last), terms=N)


def _hs_integrand(m: SelfMap, alpha: float):
    def integrand(z: np.ndarray) -> np.ndarray:
        phi = eval_map(m, z)
        dphi = eval_derivative(m, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.abs(dphi) ** 2 / (1.0 - np.abs(phi) ** 2) ** (alpha + 4.0)

    return integrand


def hs_norm_integral(m: SelfMap, p: SpaceParams, q: DiskQuadrature) -> float:
    """
    sqrt(∫_D |φ′|² / (1-|φ|²)^{α+4} dA_α) por cuadratura.

    Solo es confiable con ‖φ‖_∞ < 1; en otro caso se emite warning.
    """
    if m.sup_norm_bound >= 1.0:
        logger.warning(
            f"hs_norm_integral con ‖φ‖_∞ = 1 ({m.kind}): la cuadratura puede no ser confiable"
        )
    value = integrate_disk(_hs_integrand(m, p.alpha), p.alpha, q)
    return math.sqrt(value)


def hs_integral_series(m: SelfMap, p: SpaceParams, terms: int = 2000, tol: float = 1e-16) -> float:
    """
    La misma integral que hs_norm_integral, por coeficientes:

        Σ_k C(α+3+k, k) Σ_j |c_j^{(k)}|² B(j+1, α+1),  c^{(k)} = coef(φ′ φ^k)

    Requiere ‖φ‖_∞ < 1 (Dilation o polinomio acotado).
    """
    if not isinstance(m, (Dilation, Polynomial)) or m.sup_norm_bound >= 1.0:
        raise DomainError("hs_integral_series requiere Dilation o polinomio con ‖φ‖_∞ < 1")
    a = p.alpha
    degree = 1 if isinstance(m, Dilation) else max(m.degree, 1)
    phi = np.array(as_series(m, degree).coeffs)
    dphi = np.array(derive(as_series(m, degree)).coeffs)

    total = 0.0
    binom = 1.0
    power = np.array([1.0 + 0j])
    for k in range(terms):
        if k > 0:
            binom *= (a + 3.0 + k) / k
            power = np.convolve(power, phi)
        c = np.convolve(dphi, power)
        j = np.arange(c.size)
        term = binom * float(np.sum(np.abs(c) ** 2 * beta_fn(j + 1.0, a + 1.0)))
        total += term
        if k > 0 and term < tol * total:
            break
    return math.sqrt(total)


def hs_equivalence_ratio(
    m: SelfMap,
    p: SpaceParams,
    q: DiskQuadrature,
    N: int = 2000,
) -> float:
    """hs_norm_basis / hs_norm_integral: constante observada, nunca se asume."""
    return hs_norm_basis(m, p, N).value / hs_norm_integral(m, p, q)


# ============================================================
# Proyecciones de cola y funciones de prueba
# ============================================================

def tail_projection(f: PowerSeries, n: int) -> PowerSeries:
    """R_n f: anula los coeficientes 0..n y conserva el resto."""
    coeffs = np.array(f.coeffs)
    coeffs[: max(n, -1) + 1] = 0.0
    return PowerSeries(coeffs)


def tail_bound(n: int, p: SpaceParams, r: float, power: int = 1, rooted: bool = True) -> float:
    """
    Cota de |(R_n f)^{(power)}(z)| / ‖f‖ para |z| ≤ r.

    power=1: Σ_{k≥n} k² β(k)^{-2} r^{2k-2}
    power=2: Σ_{k≥n} k²(k-1)² β(k)^{-2} r^{2k-4}
    rooted=True devuelve la raíz cuadrada (la forma de Cauchy-Schwarz);
    rooted=False la suma tal cual.
    """
    if power not in (1, 2):
        raise DomainError(f"power debe ser 1 o 2, recibido {power}")
    if not 0.0 <= r < 1.0:
        raise DomainError(f"Se requiere 0 <= r < 1, recibido {r}")
    total = 0.0
    start = max(n, 1)
    while True:
        k = np.arange(start, start + 4096, dtype=float)
        base = k ** 2 if power == 1 else k ** 2 * (k - 1.0) ** 2
        terms = base * (k + 1.0) ** (p.alpha - 1.0) * r ** (2.0 * k - 2.0 * power)
        total += float(np.sum(terms))
        if terms[-1] <= 1e-18 * max(total, 1e-300) or r == 0.0:
            break
        start += 4096
    return math.sqrt(total) if rooted else total


def tail_bound_check(
    f: PowerSeries,
    n: int,
    p: SpaceParams,
    r: float,
    points: np.ndarray,
    power: int = 1,
) -> dict:
    """
    Compara max |(R_n f)^{(power)}| sobre `points` (|z| ≤ r) con ambas
    formas de la cota.
    """
    pts = np.asarray(points, dtype=np.complex128)
    if np.any(np.abs(pts) > r + 1e-15):
        raise DomainError("Todos los puntos deben cumplir |z| <= r")
    tail = tail_projection(f, n)
    derived = derive(tail) if power == 1 else derive(derive(tail))
    observed = float(np.max(np.abs(evaluate(derived, pts))))
    norm = dirichlet_norm(f, p)
    printed = norm * tail_bound(n, p, r, power, rooted=False)
    rooted = norm * tail_bound(n, p, r, power, rooted=True)
    return {
        "observed": observed,
        "printed_bound": printed,
        "rooted_bound": rooted,
        "printed_holds": observed <= printed * (1 + 1e-12),
        "rooted_holds": observed <= rooted * (1 + 1e-12),
    }


def test_function(w: complex, p: SpaceParams, order: int) -> PowerSeries:
    """
    f_w(z) = (1-|w|²)^{(2+α)/2} ∫_0^z (1 - conj(w) ξ)^{-(α+2)} dξ, truncada en `order`.

    Coeficientes del integrando: b_0 = 1, b_n = b_{n-1} (n+α+1)/n · conj(w).
    """
    w = complex(w)
    if not abs(w) < 1.0:
        raise DomainError(f"Se requiere |w| < 1, recibido |w| = {abs(w)}")
    if order < 1:
        raise DomainError(f"order debe ser >= 1, recibido {order}")
    n = np.arange(1, order)
    ratios = (n + p.alpha + 1.0) / n * np.conj(w)
    b = np.concatenate([[1.0 + 0j], np.cumprod(ratios)])
    scale = (1.0 - abs(w) ** 2) ** ((2.0 + p.alpha) / 2.0)
    return integrate_from_zero(PowerSeries(scale * b))


# Evita que pytest recoja test_function como test al importarla
test_function.__test__ = False  # type: ignore[attr-defined]


def test_function_order(
    w: complex,
    base_order: int = DEFAULT_TEST_ORDER,
    max_order: int | None = None,
) -> int:
    """
    max(base_order, ceil(40 / (1 - |w|))): los coeficientes de f_w decaen
    como |w|^n, así que el orden fijo subresuelve cerca del borde.

    Raises:
        ResourceLimitError: El orden requerido supera max_order.
    """
    modulus = abs(complex(w))
    if not modulus < 1.0:
        raise DomainError(f"Se requiere |w| < 1, recibido |w| = {modulus}")
    order = max(base_order, math.ceil(TEST_ORDER_FACTOR / (1.0 - modulus)))
    cap = DEFAULT_MAX_ORDER if max_order is None else max_order
    if order > cap:
        raise ResourceLimitError(
            f"f_w con |w| = {modulus} requiere orden {order} > series.max_order={cap}"
        )
    return order


test_function_order.__test__ = False  # type: ignore[attr-defined]


def test_function_image(
    m: SelfMap,
    w: complex,
    p: SpaceParams,
    order: int,
    max_order: int | None = None,
) -> PowerSeries:
    """
    D_φ f_w = (1-|w|²)^{(2+α)/2} (1 - conj(w) φ)^{-(α+2)}, exacta hasta `order`.

    Se arma como potencia de la serie 1 - conj(w)·φ, sin truncar f_w
    antes de componer.
    """
    w = complex(w)
    if not abs(w) < 1.0:
        raise DomainError(f"Se requiere |w| < 1, recibido |w| = {abs(w)}")
    base = -np.conj(w) * _phi_coefficients(m, order)
    base[0] += 1.0
    image = power(PowerSeries(base), -(p.alpha + 2.0), order, max_order)
    return PowerSeries((1.0 - abs(w) ** 2) ** ((2.0 + p.alpha) / 2.0) * image.coeffs)


test_function_image.__test__ = False  # type: ignore[attr-defined]


def test_function_image_norm(
    m: SelfMap,
    w: complex,
    p: SpaceParams,
    order: int | None = None,
    base_order: int = DEFAULT_TEST_ORDER,
    max_order: int | None = None,
) -> float:
    """
    ‖D_φ f_w‖ (evidencia de cota inferior para la norma esencial).

    Sin `order` explícito se usa test_function_order(w, base_order, max_order).
    """
    if order is None:
        order = test_function_order(w, base_order, max_order)
    return dirichlet_norm(test_function_image(m, w, p, order, max_order), p)


test_function_image_norm.__test__ = False  # type: ignore[attr-defined]
