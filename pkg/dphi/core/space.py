"""
space.py — El espacio de Dirichlet con peso D_α, 0 < α < 1.

Norma por coeficientes:
    ‖f‖² = Σ (n+1)^{1-α} |a_n|²
Norma equivalente por integral (la que usan las pruebas de acotamiento):
    ‖f‖² ≈ |f(0)|² + ∫_D |f′|² dA_α

Los chequeos numéricos de teoremas usan siempre la norma exacta por
coeficientes; la equivalente solo se reporta (equivalence_constant).

Uso:
    from dphi.core.space import SpaceParams, dirichlet_norm, kernel
    p = SpaceParams(0.5)
    dirichlet_norm(PowerSeries.from_coeffs([1, 1]), p)   # sqrt(1 + √2)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from dphi.core.errors import DomainError
from dphi.core.quadrature import DiskQuadrature, integrate_disk
from dphi.core.series import PowerSeries, derive, evaluate

# Tolerancia absoluta de la cola en dkernel_norm
_DKERNEL_TAIL_TOL = 1e-14
_DKERNEL_CHUNK = 1024


@dataclass(frozen=True)
class SpaceParams:
    """Parámetro α del espacio D_α; solo 0 < α < 1."""

    alpha: float

    def __post_init__(self) -> None:
        a = float(self.alpha)
        if not np.isfinite(a) or not 0.0 < a < 1.0:
            raise DomainError(f"alpha debe estar en el intervalo abierto (0, 1), recibido {self.alpha}")
        object.__setattr__(self, "alpha", a)

    def weights(self, order: int) -> np.ndarray:
        """(n+1)^{1-α} para n = 0..order."""
        return np.arange(1, order + 2, dtype=float) ** (1.0 - self.alpha)

    def beta(self, n: int | np.ndarray) -> float | np.ndarray:
        """β(n) = (n+1)^{(1-α)/2}, la norma de z^n."""
        return (np.asarray(n, dtype=float) + 1.0) ** ((1.0 - self.alpha) / 2.0)


def _check_disk_point(w: complex) -> complex:
    w = complex(w)
    if not abs(w) < 1.0:
        raise DomainError(f"Se requiere |w| < 1, recibido |w| = {abs(w)}")
    return w


# ============================================================
# Normas y producto interno
# ============================================================

def dirichlet_norm(f: PowerSeries, p: SpaceParams) -> float:
    """sqrt(Σ_{n≤order} (n+1)^{1-α}|a_n|²), exacta para la truncación."""
    return float(np.sqrt(np.sum(p.weights(f.order) * np.abs(f.coeffs) ** 2)))


def inner(f: PowerSeries, g: PowerSeries, p: SpaceParams) -> complex:
    """Σ (n+1)^{1-α} a_n conj(b_n) hasta el menor de los órdenes."""
    order = min(f.order, g.order)
    a = f.coeffs[: order + 1]
    b = g.coeffs[: order + 1]
    return complex(np.sum(p.weights(order) * a * np.conj(b)))


def kernel(w: complex, p: SpaceParams, order: int) -> PowerSeries:
    """Núcleo reproductor k_w: coeficientes conj(w)^n / (n+1)^{1-α}."""
    w = _check_disk_point(w)
    n = np.arange(order + 1)
    return PowerSeries(np.conj(w) ** n / p.weights(order))


def dkernel(w: complex, p: SpaceParams, order: int) -> PowerSeries:
    """Núcleo de la primera derivada: n·conj(w)^{n-1} / (n+1)^{1-α}, n ≥ 1."""
    w = _check_disk_point(w)
    coeffs = np.zeros(order + 1, dtype=np.complex128)
    if order >= 1:
        n = np.arange(1, order + 1)
        coeffs[1:] = n * np.conj(w) ** (n - 1) / p.weights(order)[1:]
    return PowerSeries(coeffs)


def dkernel_norm(w: complex, p: SpaceParams) -> float:
    """
    ‖k_w^{(1)}‖ = sqrt(Σ_{n≥1} n²|w|^{2(n-1)} / (n+1)^{1-α}).

    Suma por bloques hasta que la cota geométrica de la cola baja
    de 1e-14. La suma arranca en n = 1 (en w = 0 vale 2^{(α-1)/2}).
    """
    w = _check_disk_point(w)
    q2 = abs(w) ** 2
    total = 0.0
    start = 1
    while True:
        n = np.arange(start, start + _DKERNEL_CHUNK, dtype=float)
        terms = n ** 2 * q2 ** (n - 1) / (n + 1.0) ** (1.0 - p.alpha)
        total += float(np.sum(terms))
        n_last = n[-1]
        ratio = ((n_last + 2.0) / (n_last + 1.0)) ** 2 * q2
        next_term = (n_last + 1.0) ** 2 * q2 ** n_last / (n_last + 2.0) ** (1.0 - p.alpha)
        if ratio < 1.0 and next_term / (1.0 - ratio) < _DKERNEL_TAIL_TOL:
            break
        start += _DKERNEL_CHUNK
    return float(np.sqrt(total))


# ============================================================
# Norma equivalente por integral
# ============================================================

def equivalent_norm(f: PowerSeries, p: SpaceParams, q: DiskQuadrature) -> float:
    """sqrt(|f(0)|² + ∫_D |f′|² dA_α) por cuadratura."""
    df = derive(f)
    integral = integrate_disk(lambda z: np.abs(evaluate(df, z)) ** 2, p.alpha, q)
    return float(np.sqrt(abs(f.coeffs[0]) ** 2 + integral))


def equivalence_constant(
    polys: Iterable[PowerSeries],
    p: SpaceParams,
    q: DiskQuadrature,
) -> float:
    """
    Constante de equivalencia observada entre las dos normas.

    Devuelve el menor C tal que equivalent_norm/dirichlet_norm ∈ [1/C, C]
    para todos los polinomios dados (los nulos se ignoran).
    """
    worst = 1.0
    for f in polys:
        exact = dirichlet_norm(f, p)
        if exact == 0.0:
            continue
        ratio = equivalent_norm(f, p, q) / exact
        worst = max(worst, ratio, 1.0 / ratio)
    return worst


__all__ = [
    "SpaceParams",
    "DiskQuadrature",
    "integrate_disk",
    "dirichlet_norm",
    "inner",
    "kernel",
    "dkernel",
    "dkernel_norm",
    "equivalent_norm",
    "equivalence_constant",
]
