"""
diagnostics.py — Evidencia numérica de acotamiento y compacidad.

El funcional de acotamiento es
    B(w) = N_φ,α(w) / (1 - |w|²)^{α+2}
y D_φ es acotado / compacto según sup B < ∞ / B(w) → 0 cuando |w| → 1.
Un limsup no es computable: se evalúa B en capas radiales 1 - 2^{-k},
se ajusta una pendiente log-log de los máximos por capa contra (1 - ρ)
en las capas externas, y se clasifica con una regla declarada.

Rutas del perfil:
    univalent-source   Lens, Automorphism: (1-|z|²)^α / (1-|φ(z)|²)^{α+2}
                       en la variable de origen (no requiere inversa)
    target             Dilation, Polynomial, SingularExp: B en capas de w

Uso:
    from dphi.core.diagnostics import radial_profile
    report = radial_profile(parse_map_spec("lens:0.1"), SpaceParams(0.5))
    report.verdict   # "compact-evidence"
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from dphi.config import CountingConfig, DiagnosticsConfig
from dphi.core.counting import counting, counting_grid
from dphi.core.errors import DomainError, DphiError
from dphi.core.maps import (
    Automorphism,
    Dilation,
    Lens,
    Polynomial,
    SelfMap,
    eval_map,
    format_map_spec,
)
from dphi.core.operator import DEFAULT_TEST_ORDER, test_function_image_norm
from dphi.core.space import SpaceParams
from dphi.utils.logger import get_logger
from dphi.utils.validators import validate_shells

logger = get_logger("dphi.diagnostics")

ROUTE_SOURCE = "univalent-source"
ROUTE_TARGET = "target"

TREND_DECAYING = "decaying-to-zero"
TREND_PLATEAU = "bounded-plateau"
TREND_DIVERGING = "diverging"
TREND_INCONCLUSIVE = "inconclusive"

VERDICTS = {
    TREND_DECAYING: "compact-evidence",
    TREND_PLATEAU: "bounded-noncompact-evidence",
    TREND_DIVERGING: "unbounded-evidence",
    TREND_INCONCLUSIVE: "inconclusive",
}

# Factor máximo max/min de la ventana para aceptar una meseta
PLATEAU_FACTOR = 2.0


@dataclass
class BoundednessReport:
    """
    Perfil radial de B y su clasificación.

    samples guarda (radio de capa, máximo de B en la capa); una capa que
    falló queda con NaN y cuenta en `failures`.
    """

    map_spec: str
    alpha: float
    route: str
    samples: list[tuple[float, float]]
    sup_estimate: float
    slope: float | None
    outer_trend: str
    verdict: str
    failures: int = 0
    notes: list[str] = field(default_factory=list)

    def to_record(self) -> dict:
        """Registro JSON (schema 1)."""
        return {
            "schema": 1,
            "map": self.map_spec,
            "alpha": self.alpha,
            "route": self.route,
            "shells": [{"radius": r, "max": v} for r, v in self.samples],
            "sup_estimate": self.sup_estimate,
            "slope": self.slope,
            "outer_trend": self.outer_trend,
            "verdict": self.verdict,
            "failures": self.failures,
            "notes": list(self.notes),
        }

    def to_rows(self) -> list[dict]:
        """Una fila por capa (para CSV)."""
        return [{"radius": r, "max": v} for r, v in self.samples]


def default_shells(k_max: int = 14) -> list[float]:
    """Capas 1 - 2^{-k}, k = 1..k_max."""
    return [1.0 - 2.0 ** (-k) for k in range(1, k_max + 1)]


def _shell_points(radius: float, points: int) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(points) / points
    return radius * np.exp(1j * theta)


# ============================================================
# Funcionales
# ============================================================

def b_functional(
    m: SelfMap,
    p: SpaceParams,
    w: complex,
    settings: CountingConfig | None = None,
) -> float:
    """B(w) = N_φ,α(w) / (1 - |w|²)^{α+2}."""
    w = complex(w)
    if not abs(w) < 1.0:
        raise DomainError(f"Se requiere |w| < 1, recibido |w| = {abs(w)}")
    value = counting(m, p, w, settings).value
    return value / (1.0 - abs(w) ** 2) ** (p.alpha + 2.0)


def b_functional_grid(
    m: SelfMap,
    p: SpaceParams,
    ws: np.ndarray,
    settings: CountingConfig | None = None,
) -> np.ndarray:
    """B sobre un arreglo de puntos (vía counting_grid)."""
    ws = np.asarray(ws, dtype=np.complex128)
    values, _ = counting_grid(m, p, ws, settings)
    return values / (1.0 - np.abs(ws) ** 2) ** (p.alpha + 2.0)


def univalent_b(m: SelfMap, p: SpaceParams, w: complex | np.ndarray) -> float | np.ndarray:
    """
    (1 - |w|²)^α / (1 - |φ(w)|²)^{α+2}: B evaluado en φ(w) sin invertir.
    """
    if not m.univalent:
        raise DomainError(f"univalent_b requiere un mapeo univalente, recibido '{m.kind}'")
    ww = np.asarray(w, dtype=np.complex128)
    phi = np.asarray(eval_map(m, ww))
    if isinstance(m, Automorphism):
        # 1 - |φ_β(w)|² por la identidad exacta (sin cancelación cerca de |w| = 1)
        one_minus = (1.0 - abs(m.beta) ** 2) * (1.0 - np.abs(ww) ** 2) / np.abs(1.0 - np.conj(m.beta) * ww) ** 2
    else:
        one_minus = 1.0 - np.abs(phi) ** 2
    values = (1.0 - np.abs(ww) ** 2) ** p.alpha / one_minus ** (p.alpha + 2.0)
    return float(values) if values.ndim == 0 else values


# ============================================================
# Regla de tendencia
# ============================================================

def classify_trend(
    samples: Sequence[tuple[float, float]],
    window: int = 6,
    slope_tol: float = 0.05,
) -> tuple[str, float | None]:
    """
    Pendiente s de log(max) contra log(1 - ρ) en las `window` capas externas.

    - todas las máximas externas = 0  → decaying-to-zero
    - s ≥ slope_tol                   → decaying-to-zero
    - s ≤ -slope_tol                  → diverging
    - |s| < slope_tol y max/min ≤ 2   → bounded-plateau
    - otro caso                       → inconclusive

    Returns:
        (tendencia, pendiente o None si no se pudo ajustar).
    """
    valid = [(r, v) for r, v in samples if np.isfinite(v)]
    outer = valid[-window:]
    if len(outer) < 2:
        return TREND_INCONCLUSIVE, None

    radii = np.array([r for r, _ in outer])
    máxima = np.array([v for _, v in outer])
    if np.all(máxima == 0.0):
        return TREND_DECAYING, None
    if máxima[-1] == 0.0:
        # El soporte termina dentro de la ventana
        return TREND_DECAYING, None

    positive = máxima > 0.0
    if positive.sum() < 2:
        return TREND_INCONCLUSIVE, None
    slope = float(np.polyfit(np.log(1.0 - radii[positive]), np.log(máxima[positive]), 1)[0])

    if slope >= slope_tol:
        return TREND_DECAYING, slope
    if slope <= -slope_tol:
        return TREND_DIVERGING, slope
    spread = máxima[positive].max() / máxima[positive].min()
    if spread <= PLATEAU_FACTOR:
        return TREND_PLATEAU, slope
    return TREND_INCONCLUSIVE, slope


# ============================================================
# Perfil radial
# ============================================================

def _profile_route(m: SelfMap) -> str:
    return ROUTE_SOURCE if isinstance(m, (Lens, Automorphism)) else ROUTE_TARGET


def radial_profile(
    m: SelfMap,
    p: SpaceParams,
    shells: Sequence[float] | None = None,
    points_per_shell: int = 256,
    diagnostics: DiagnosticsConfig | None = None,
    settings: CountingConfig | None = None,
) -> BoundednessReport:
    """
    Máximo de B por capa y clasificación de la tendencia externa.

    Las capas que fallan (errores de conteo) quedan como NaN; si fallan
    todas el veredicto es inconclusive.
    """
    diag = diagnostics if diagnostics is not None else DiagnosticsConfig()
    radii = list(shells) if shells is not None else default_shells(diag.shell_exponents)
    ok, error = validate_shells([float(r) for r in radii])
    if not ok:
        raise DomainError(error)

    route = _profile_route(m)
    samples: list[tuple[float, float]] = []
    failures = 0
    notes: list[str] = []
    for radius in radii:
        pts = _shell_points(radius, points_per_shell)
        try:
            if route == ROUTE_SOURCE:
                values = univalent_b(m, p, pts)
            else:
                values = b_functional_grid(m, p, pts, settings)
            shell_max = float(np.max(values))
            if not np.isfinite(shell_max):
                raise DomainError(f"B no finito en la capa {radius}")
        except DphiError as e:
            failures += 1
            notes.append(f"capa {radius}: {e}")
            logger.warning(f"Falló la capa {radius}: {e}")
            shell_max = float("nan")
        samples.append((float(radius), shell_max))

    finite = [v for _, v in samples if np.isfinite(v)]
    sup_estimate = max(finite) if finite else float("nan")
    if not finite:
        trend, slope = TREND_INCONCLUSIVE, None
    else:
        trend, slope = classify_trend(samples, diag.trend_window, diag.slope_tol)

    return BoundednessReport(
        map_spec=format_map_spec(m),
        alpha=p.alpha,
        route=route,
        samples=samples,
        sup_estimate=sup_estimate,
        slope=slope,
        outer_trend=trend,
        verdict=VERDICTS[trend],
        failures=failures,
        notes=notes,
    )


# ============================================================
# Norma esencial, monotonía, ‖φ‖_∞ < 1
# ============================================================

def radial_lower_profile(
    m: SelfMap,
    p: SpaceParams,
    radii: Sequence[float],
    test_order: int = DEFAULT_TEST_ORDER,
    max_order: int | None = None,
) -> list[tuple[float, float]]:
    """
    ‖D_φ f_w‖ con w = ρ sobre la malla radial dada.

    El orden de cada f_w es max(test_order, ceil(40/(1-ρ))).
    """
    profile = []
    for rho in radii:
        value = test_function_image_norm(m, rho, p, base_order=test_order, max_order=max_order)
        logger.debug(f"‖D_φ f_w‖ en ρ={rho}: {value!r}")
        profile.append((float(rho), value))
    return profile


def essential_norm_bracket(
    m: SelfMap,
    p: SpaceParams,
    diagnostics: DiagnosticsConfig | None = None,
    test_order: int = DEFAULT_TEST_ORDER,
    settings: CountingConfig | None = None,
    max_order: int | None = None,
) -> tuple[float, float]:
    """
    (sqrt del máximo de B en la capa externa, ‖D_φ f_w‖ en el radio externo).

    Las constantes de equivalencia son desconocidas: los dos números se
    reportan sin afirmar que encierren a ‖D_φ‖_e.

    Raises:
        DomainError: Mapeo fuera de {Dilation, Lens, polinomio con ‖φ‖_∞ < 1}.
        ResourceLimitError: El radio externo pide un orden de f_w mayor
            que max_order.
    """
    acceptable = isinstance(m, (Dilation, Lens)) or (
        isinstance(m, Polynomial) and m.sup_norm_bound < 1.0
    )
    if not acceptable:
        raise DomainError(
            "essential_norm_bracket acepta Dilation, Lens o polinomios con ‖φ‖_∞ < 1"
        )
    diag = diagnostics if diagnostics is not None else DiagnosticsConfig()
    report = radial_profile(m, p, diagnostics=diag, settings=settings,
                            points_per_shell=diag.points_per_shell)
    outer = report.samples[-1][1]
    upper = float(np.sqrt(outer)) if np.isfinite(outer) else float("nan")

    radii = [1.0 - 2.0 ** (-k) for k in range(1, diag.test_radii_exponents + 1)]
    lower_profile = radial_lower_profile(m, p, radii, test_order, max_order)
    return upper, lower_profile[-1][1]


def _standard_grid() -> np.ndarray:
    radii = np.linspace(0.05, 0.99, 48)
    theta = 2.0 * np.pi * np.arange(64) / 64
    return (radii[:, None] * np.exp(1j * theta)[None, :]).reshape(-1)


def monotonicity_check(
    m: SelfMap,
    alpha: float,
    gamma: float,
    grid: np.ndarray | None = None,
    settings: CountingConfig | None = None,
) -> float:
    """
    max_w (B_γ(w) - B_α(w)) sobre la malla; con φ(0) = 0 y α ≤ γ la
    desigualdad B_γ ≤ B_α es exacta punto a punto.
    """
    if not m.fixes_origin:
        raise DomainError("monotonicity_check requiere φ(0) = 0")
    if not 0.0 < alpha <= gamma < 1.0:
        raise DomainError(f"Se requiere 0 < alpha <= gamma < 1, recibido ({alpha}, {gamma})")
    ws = _standard_grid() if grid is None else np.asarray(grid, dtype=np.complex128)
    b_alpha = b_functional_grid(m, SpaceParams(alpha), ws, settings)
    b_gamma = b_functional_grid(m, SpaceParams(gamma), ws, settings)
    return float(np.max(b_gamma - b_alpha))


def small_supnorm_compactness(
    m: SelfMap,
    p: SpaceParams,
    points_per_shell: int = 256,
    settings: CountingConfig | None = None,
) -> bool:
    """
    Con ‖φ‖_∞ < 1, B(w) = 0 para |w| > ‖φ‖_∞. Verifica eso en capas
    entre la cota y el circulo unitario.
    """
    bound = m.sup_norm_bound
    if not bound < 1.0:
        raise DomainError(f"small_supnorm_compactness requiere ‖φ‖_∞ < 1 ({m.kind} tiene cota 1)")
    radii = [bound + (1.0 - bound) * (1.0 - 2.0 ** (-k)) for k in range(1, 15)]
    for radius in radii:
        values = b_functional_grid(m, p, _shell_points(radius, points_per_shell), settings)
        if np.any(values != 0.0):
            return False
    return True
