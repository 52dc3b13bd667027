"""
series.py — Aritmética de series de potencias truncadas.

Representa f(z) = Σ_{n≤N} c_n z^n con coeficientes complejos densos.
Todas las funciones de D_α (núcleos, f_w, imágenes D_φ e_n) viven aquí.

Convenciones:
- Las series son inmutables (el arreglo interno es de solo lectura).
- El orden del resultado es el mínimo de los órdenes de entrada,
  salvo compose, donde el orden de salida se declara explícitamente.

Uso:
    from dphi.core.series import PowerSeries, compose, derive
    f = PowerSeries.from_coeffs([1, 1])          # 1 + z
    g = PowerSeries.from_coeffs([0, 1, 1])       # z + z²
    h = compose(f, g, out_order=2)               # 1 + z + z²
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from dphi.core.errors import DomainError, ResourceLimitError

# Cota de compose y power cuando no llega max_order (config: series.max_order)
DEFAULT_MAX_ORDER = 65536


@dataclass(frozen=True)
class PowerSeries:
    """
    Serie de potencias truncada en grado `order`.

    Campos:
        coeffs: Arreglo complejo de solo lectura con order+1 entradas.
    """

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.coeffs, dtype=np.complex128).reshape(-1)
        if arr.size == 0:
            raise DomainError("Una serie necesita al menos un coeficiente")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[complex]) -> PowerSeries:
        return cls(np.asarray(list(coeffs), dtype=np.complex128))

    @classmethod
    def zero(cls, order: int = 0) -> PowerSeries:
        return cls(np.zeros(order + 1, dtype=np.complex128))

    @classmethod
    def constant(cls, c: complex) -> PowerSeries:
        return cls(np.array([c], dtype=np.complex128))

    @classmethod
    def monomial(cls, n: int, c: complex = 1.0) -> PowerSeries:
        """c·z^n, truncada exactamente en grado n."""
        arr = np.zeros(n + 1, dtype=np.complex128)
        arr[n] = c
        return cls(arr)

    def __len__(self) -> int:
        return self.coeffs.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.order == other.order and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash(self.coeffs.tobytes())

    def __call__(self, z: complex | np.ndarray) -> complex | np.ndarray:
        return evaluate(self, z)


# ============================================================
# Operaciones
# ============================================================

def truncate(f: PowerSeries, order: int) -> PowerSeries:
    """Corta f en grado `order` (rellena con ceros si f es más corta)."""
    if order < 0:
        raise DomainError(f"Orden negativo: {order}")
    if order <= f.order:
        return PowerSeries(f.coeffs[: order + 1])
    return pad(f, order)


def pad(f: PowerSeries, order: int) -> PowerSeries:
    """Extiende f con ceros hasta grado `order`; nunca recorta."""
    if order <= f.order:
        return f
    arr = np.zeros(order + 1, dtype=np.complex128)
    arr[: f.order + 1] = f.coeffs
    return PowerSeries(arr)


def derive(f: PowerSeries) -> PowerSeries:
    """f′: coeficiente n es (n+1)·c_{n+1}; el orden baja en 1."""
    if f.order == 0:
        return PowerSeries.zero(0)
    n = np.arange(1, f.order + 1)
    return PowerSeries(n * f.coeffs[1:])


def integrate_from_zero(f: PowerSeries) -> PowerSeries:
    """∫_0^z f: coeficiente n+1 es c_n/(n+1), término constante 0."""
    arr = np.zeros(f.order + 2, dtype=np.complex128)
    arr[1:] = f.coeffs / np.arange(1, f.order + 2)
    return PowerSeries(arr)


def add(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    order = min(f.order, g.order)
    return PowerSeries(f.coeffs[: order + 1] + g.coeffs[: order + 1])


def scale(f: PowerSeries, c: complex) -> PowerSeries:
    return PowerSeries(c * f.coeffs)


def multiply(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """Producto de Cauchy truncado al menor de los órdenes."""
    order = min(f.order, g.order)
    prod = np.convolve(f.coeffs[: order + 1], g.coeffs[: order + 1])
    return PowerSeries(prod[: order + 1])


def _mul_trunc(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    """Producto de arreglos de coeficientes cortado en `order`."""
    return np.convolve(a[: order + 1], b[: order + 1])[: order + 1]


def compose(
    f: PowerSeries,
    g: PowerSeries,
    out_order: int,
    max_order: int | None = None,
) -> PowerSeries:
    """
    Coeficientes de f(g(z)) exactos hasta grado out_order.

    Horner anidado: acc ← acc·g + c_k, truncando en cada paso. No se
    verifica que g sea un auto-mapeo; eso le toca a maps.

    Raises:
        ResourceLimitError: out_order por encima de la cota configurada.
    """
    _check_order(out_order, max_order)
    gc = pad(g, out_order).coeffs[: out_order + 1]
    acc = np.zeros(out_order + 1, dtype=np.complex128)
    for c in f.coeffs[::-1]:
        acc = _mul_trunc(acc, gc, out_order)
        acc[0] += c
    return PowerSeries(acc)


def power(
    g: PowerSeries,
    exponent: float,
    out_order: int,
    max_order: int | None = None,
) -> PowerSeries:
    """
    g^p con la rama principal en g(0), exacta hasta grado out_order.

    De g·h′ = p·g′·h sale la recurrencia
        n g_0 h_n = Σ_{k=1}^{n} ((p+1)k - n) g_k h_{n-k},
    que cuesta O(out_order · grado de g): lineal para polinomios.

    Raises:
        DomainError: g(0) = 0.
        ResourceLimitError: out_order por encima de la cota.
    """
    _check_order(out_order, max_order)
    gc = np.trim_zeros(g.coeffs, "b")
    if gc.size == 0 or gc[0] == 0:
        raise DomainError("power requiere g(0) ≠ 0")
    degree = min(gc.size - 1, out_order)
    k = np.arange(1, degree + 1)
    g_k = gc[1 : degree + 1]
    pk_g_k = (exponent + 1.0) * k * g_k

    h = np.zeros(out_order + 1, dtype=np.complex128)
    h[0] = gc[0] ** exponent
    for n in range(1, out_order + 1):
        m = min(n, degree)
        tail = h[n - 1 :: -1][:m]
        h[n] = (np.dot(pk_g_k[:m], tail) - n * np.dot(g_k[:m], tail)) / (n * gc[0])
    return PowerSeries(h)


def _check_order(out_order: int, max_order: int | None) -> None:
    cap = DEFAULT_MAX_ORDER if max_order is None else max_order
    if out_order < 0:
        raise DomainError(f"out_order debe ser >= 0, recibido {out_order}")
    if out_order > cap:
        raise ResourceLimitError(
            f"out_order={out_order} excede el límite series.max_order={cap}"
        )


def evaluate(f: PowerSeries, z: complex | np.ndarray) -> complex | np.ndarray:
    """Evalúa la serie truncada (Horner); acepta escalares o arreglos."""
    zz = np.asarray(z, dtype=np.complex128)
    acc = np.zeros_like(zz)
    for c in f.coeffs[::-1]:
        acc = acc * zz + c
    if acc.ndim == 0:
        return complex(acc)
    return acc
