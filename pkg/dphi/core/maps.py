"""
maps.py — Catalogo de auto-mapeos analiticos φ del disco.

Variantes:
    Dilation(r)              φ(z) = r z
    Automorphism(beta, eta)  φ(z) = η (β - z) / (1 - conj(β) z)
    Lens(delta)              φ(z) = (σ^δ - 1)/(σ^δ + 1), σ(z) = (1+z)/(1-z)
    SingularExp()            φ(z) = exp((z+1)/(z-1))
    Polynomial(coeffs)       φ(z) = Σ c_k z^k  (con screen de auto-mapeo)

Spec strings (CLI):
    "dilation:0.5", "auto:0.3+0.1i", "auto:0.3,-1", "lens:0.1",
    "exp", "poly:0,0,1"

Uso:
    from dphi.core.maps import parse_map_spec, eval_map
    m = parse_map_spec("lens:0.1")
    eval_map(m, 0.3)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar, Union

import numpy as np

from dphi.core.errors import DomainError, MapSpecError
from dphi.core.series import PowerSeries

ArrayLike = Union[complex, np.ndarray]

# Screen de auto-mapeo para polinomios
SCREEN_POINTS = 500
SCREEN_RADIUS = 0.999


def _as_points(z: ArrayLike) -> np.ndarray:
    zz = np.asarray(z, dtype=np.complex128)
    if np.any(np.abs(zz) >= 1.0):
        raise DomainError("eval_map requiere |z| < 1 en todos los puntos")
    return zz


def _scalar_or_array(values: np.ndarray) -> ArrayLike:
    if values.ndim == 0:
        return complex(values)
    return values


# ============================================================
# Variantes
# ============================================================

@dataclass(frozen=True)
class SelfMap:
    """
    Base de todas las variantes.

    Metadatos:
        univalent: φ es inyectiva en el disco.
        fixes_origin: φ(0) = 0.
        sup_norm_bound: Cota de ‖φ‖_∞ en (0, 1].
    """

    kind: ClassVar[str] = "selfmap"

    @property
    def univalent(self) -> bool:
        return False

    @property
    def fixes_origin(self) -> bool:
        return abs(self._raw(np.complex128(0.0))) == 0.0

    @property
    def sup_norm_bound(self) -> float:
        return 1.0

    @property
    def series_capable(self) -> bool:
        return True

    def _raw(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _raw_derivative(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _taylor(self, order: int) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, z: ArrayLike) -> ArrayLike:
        return eval_map(self, z)


@dataclass(frozen=True)
class Dilation(SelfMap):
    r: complex = 0.5
    kind: ClassVar[str] = "dilation"

    def __post_init__(self) -> None:
        r = complex(self.r)
        if not 0.0 < abs(r) < 1.0:
            raise DomainError(f"Dilation requiere 0 < |r| < 1, recibido {self.r}")
        object.__setattr__(self, "r", r)

    @property
    def univalent(self) -> bool:
        return True

    @property
    def fixes_origin(self) -> bool:
        return True

    @property
    def sup_norm_bound(self) -> float:
        return abs(self.r)

    def _raw(self, z: np.ndarray) -> np.ndarray:
        return self.r * z

    def _raw_derivative(self, z: np.ndarray) -> np.ndarray:
        return np.full_like(z, self.r)

    def _taylor(self, order: int) -> np.ndarray:
        c = np.zeros(order + 1, dtype=np.complex128)
        if order >= 1:
            c[1] = self.r
        return c

    def inverse(self, w: np.ndarray) -> np.ndarray:
        return w / self.r


@dataclass(frozen=True)
class Automorphism(SelfMap):
    beta: complex = 0.0
    eta: complex = 1.0
    kind: ClassVar[str] = "auto"

    def __post_init__(self) -> None:
        beta, eta = complex(self.beta), complex(self.eta)
        if not abs(beta) < 1.0:
            raise DomainError(f"Automorphism requiere |beta| < 1, recibido {self.beta}")
        if abs(abs(eta) - 1.0) > 1e-12:
            raise DomainError(f"Automorphism requiere |eta| = 1, recibido {self.eta}")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "eta", eta)

    @property
    def univalent(self) -> bool:
        return True

    @property
    def fixes_origin(self) -> bool:
        return self.beta == 0

    def _raw(self, z: np.ndarray) -> np.ndarray:
        return self.eta * (self.beta - z) / (1.0 - np.conj(self.beta) * z)

    def _raw_derivative(self, z: np.ndarray) -> np.ndarray:
        b = self.beta
        return -self.eta * (1.0 - abs(b) ** 2) / (1.0 - np.conj(b) * z) ** 2

    def _taylor(self, order: int) -> np.ndarray:
        b = self.beta
        c = np.zeros(order + 1, dtype=np.complex128)
        c[0] = b
        if order >= 1:
            n = np.arange(1, order + 1)
            c[1:] = (abs(b) ** 2 - 1.0) * np.conj(b) ** (n - 1)
        return self.eta * c

    def inverse(self, w: np.ndarray) -> np.ndarray:
        """φ_β es involución: la preimagen de w es φ_β(conj(η) w)."""
        v = np.conj(self.eta) * w
        return (self.beta - v) / (1.0 - np.conj(self.beta) * v)


@dataclass(frozen=True)
class Lens(SelfMap):
    delta: float = 0.5
    kind: ClassVar[str] = "lens"

    def __post_init__(self) -> None:
        d = float(self.delta)
        if not 0.0 < d < 1.0:
            raise DomainError(f"Lens requiere delta en (0, 1), recibido {self.delta}")
        object.__setattr__(self, "delta", d)

    @property
    def univalent(self) -> bool:
        return True

    @property
    def fixes_origin(self) -> bool:
        return True

    def _raw(self, z: np.ndarray) -> np.ndarray:
        u = ((1.0 + z) / (1.0 - z)) ** self.delta
        return (u - 1.0) / (u + 1.0)

    def _raw_derivative(self, z: np.ndarray) -> np.ndarray:
        sigma = (1.0 + z) / (1.0 - z)
        u = sigma ** self.delta
        dsigma = 2.0 / (1.0 - z) ** 2
        return 2.0 / (u + 1.0) ** 2 * self.delta * u / sigma * dsigma

    def _taylor(self, order: int) -> np.ndarray:
        # log σ = 2 Σ_{n impar} z^n / n ; σ^δ = exp(δ log σ)
        n = np.arange(order + 1)
        log_sigma = np.zeros(order + 1, dtype=np.complex128)
        odd = n % 2 == 1
        log_sigma[odd] = 2.0 / n[odd]
        u = _series_exp(self.delta * log_sigma)
        num = u.copy()
        num[0] -= 1.0
        den = u.copy()
        den[0] += 1.0
        return _series_divide(num, den)

    def inverse(self, w: np.ndarray) -> np.ndarray:
        """
        Preimagen por la lente inversa; NaN fuera de la imagen.

        La imagen es el sector |arg σ(w)| < δπ/2, así que se revisa el
        argumento antes de la potencia 1/δ (que daría la vuelta).
        """
        sigma = (1.0 + w) / (1.0 - w)
        arg = np.angle(sigma)
        inside = np.abs(arg) < self.delta * np.pi / 2.0
        s = np.exp(np.log(sigma) / self.delta)
        z = (s - 1.0) / (s + 1.0)
        return np.where(inside, z, np.nan + 0j)


@dataclass(frozen=True)
class SingularExp(SelfMap):
    kind: ClassVar[str] = "exp"

    @property
    def fixes_origin(self) -> bool:
        return False

    @property
    def series_capable(self) -> bool:
        return False

    def _raw(self, z: np.ndarray) -> np.ndarray:
        return np.exp((z + 1.0) / (z - 1.0))

    def _raw_derivative(self, z: np.ndarray) -> np.ndarray:
        return self._raw(z) * (-2.0) / (z - 1.0) ** 2


@dataclass(frozen=True)
class Polynomial(SelfMap):
    """
    φ(z) = Σ c_k z^k.

    La validez como auto-mapeo es un screen muestreado (ver
    screen_self_map), no una prueba. `is_univalent` solo se respeta si
    el llamador ya lo verificó; por defecto se asume univalente solo
    en grado 1.
    """

    coeffs: tuple[complex, ...] = (0.0, 1.0)
    is_univalent: bool = field(default=False, compare=False)
    kind: ClassVar[str] = "poly"

    def __post_init__(self) -> None:
        cs = tuple(complex(c) for c in self.coeffs)
        if not cs:
            raise DomainError("Polynomial necesita al menos un coeficiente")
        # Quitar ceros finales para que el grado sea el real
        while len(cs) > 1 and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs)
        ok, message = screen_self_map(self)
        if not ok:
            raise DomainError(f"El polinomio no es auto-mapeo del disco: {message}")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def univalent(self) -> bool:
        return self.is_univalent or self.degree == 1

    @property
    def fixes_origin(self) -> bool:
        return self.coeffs[0] == 0

    @property
    def sup_norm_bound(self) -> float:
        total = float(sum(abs(c) for c in self.coeffs))
        return total if total < 1.0 else 1.0

    def _raw(self, z: np.ndarray) -> np.ndarray:
        acc = np.zeros_like(z, dtype=np.complex128)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def _raw_derivative(self, z: np.ndarray) -> np.ndarray:
        acc = np.zeros_like(z, dtype=np.complex128)
        for k in range(self.degree, 0, -1):
            acc = acc * z + k * self.coeffs[k]
        return acc

    def _taylor(self, order: int) -> np.ndarray:
        c = np.zeros(order + 1, dtype=np.complex128)
        n = min(order, self.degree)
        c[: n + 1] = self.coeffs[: n + 1]
        return c


# ============================================================
# Helpers de series (solo para la lente)
# ============================================================

def _series_exp(h: np.ndarray) -> np.ndarray:
    """exp(h) truncada: n g_n = Σ_{k=1}^n k h_k g_{n-k}."""
    order = h.size - 1
    g = np.zeros(order + 1, dtype=np.complex128)
    g[0] = np.exp(h[0])
    k = np.arange(1, order + 1)
    kh = k * h[1:]
    for n in range(1, order + 1):
        g[n] = np.dot(kh[:n], g[n - 1::-1]) / n
    return g


def _series_divide(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a/b truncada; requiere b_0 ≠ 0."""
    order = a.size - 1
    q = np.zeros(order + 1, dtype=np.complex128)
    for n in range(order + 1):
        acc = a[n] - np.dot(b[1 : n + 1], q[n - 1 :: -1]) if n > 0 else a[0]
        q[n] = acc / b[0]
    return q


# ============================================================
# Operaciones publicas
# ============================================================

def eval_map(m: SelfMap, z: ArrayLike) -> ArrayLike:
    """φ(z) por la fórmula exacta de la variante. Rechaza |z| >= 1."""
    return _scalar_or_array(m._raw(_as_points(z)))


def eval_derivative(m: SelfMap, z: ArrayLike) -> ArrayLike:
    """φ′(z) en forma cerrada. Rechaza |z| >= 1."""
    return _scalar_or_array(m._raw_derivative(_as_points(z)))


def as_series(m: SelfMap, order: int) -> PowerSeries:
    """
    Coeficientes de Taylor de φ en 0 hasta `order`.

    Raises:
        DomainError: Para SingularExp (variante sin soporte de series).
    """
    if not m.series_capable:
        raise DomainError(
            f"La variante '{m.kind}' no soporta expansión en serie; "
            "usa `diagnose` para evidencia de no compacidad"
        )
    if order < 0:
        raise DomainError(f"Orden negativo: {order}")
    return PowerSeries(m._taylor(order))


def value_at_origin(m: SelfMap) -> complex:
    """φ(0)."""
    return complex(m._raw(np.complex128(0.0)))


def screen_self_map(m: SelfMap, n_points: int = SCREEN_POINTS, seed: int = 0) -> tuple[bool, str]:
    """
    Screen muestreado: |φ(z)| < 1 en n_points puntos pseudoaleatorios
    con |z| ≤ 0.999 más un anillo sobre |z| = 0.999.

    Returns:
        (ok, mensaje); mensaje vacío si ok.
    """
    rng = np.random.default_rng(seed)
    radius = SCREEN_RADIUS * np.sqrt(rng.uniform(0.0, 1.0, n_points))
    angle = rng.uniform(0.0, 2.0 * np.pi, n_points)
    ring = SCREEN_RADIUS * np.exp(2j * np.pi * np.arange(128) / 128)
    pts = np.concatenate([radius * np.exp(1j * angle), ring])
    values = np.abs(m._raw(pts))
    if not np.all(np.isfinite(values)):
        return False, "valores no finitos en el screen"
    worst = int(np.argmax(values))
    if values[worst] >= 1.0:
        return False, f"|φ(z)| = {values[worst]:.6g} >= 1 en z = {complex(pts[worst]):.6g}"
    return True, ""


# ============================================================
# Spec strings
# ============================================================

def parse_complex(text: str) -> complex:
    raw = text.strip().replace(" ", "")
    if not raw:
        raise MapSpecError("Número vacío en el spec")
    try:
        value = complex(raw.replace("i", "j"))
    except ValueError as e:
        raise MapSpecError(f"Número inválido '{text}'") from e
    if not (np.isfinite(value.real) and np.isfinite(value.imag)):
        raise MapSpecError(f"Número no finito '{text}'")
    return value


def format_complex(c: complex) -> str:
    c = complex(c)
    if c.imag == 0.0:
        return repr(c.real)
    if c.real == 0.0:
        return f"{c.imag!r}i"
    sign = "+" if c.imag >= 0 else "-"
    return f"{c.real!r}{sign}{abs(c.imag)!r}i"


def parse_map_spec(text: str) -> SelfMap:
    """
    Parsea "dilation:0.5", "auto:β[,η]", "lens:δ", "exp", "poly:c0,c1,...".

    Raises:
        MapSpecError: Spec mal formado o parámetros fuera de rango.
    """
    if not isinstance(text, str) or not text.strip():
        raise MapSpecError("Spec de mapeo vacío")
    kind, _, args = text.strip().partition(":")
    kind = kind.lower()
    parts = [a for a in args.split(",")] if args else []

    try:
        if kind == "dilation" and len(parts) == 1:
            return Dilation(parse_complex(parts[0]))
        if kind == "auto" and len(parts) in (1, 2):
            eta = parse_complex(parts[1]) if len(parts) == 2 else 1.0
            return Automorphism(parse_complex(parts[0]), eta)
        if kind == "lens" and len(parts) == 1:
            delta = parse_complex(parts[0])
            if delta.imag != 0.0:
                raise MapSpecError("delta debe ser real")
            return Lens(delta.real)
        if kind == "exp" and not parts:
            return SingularExp()
        if kind == "poly" and parts:
            return Polynomial(tuple(parse_complex(c) for c in parts))
    except MapSpecError:
        raise
    except DomainError as e:
        raise MapSpecError(f"Spec '{text}': {e}") from e

    raise MapSpecError(
        f"Spec de mapeo inválido '{text}'. "
        "Formatos: dilation:r, auto:beta[,eta], lens:delta, exp, poly:c0,c1,..."
    )


def format_map_spec(m: SelfMap) -> str:
    """Inverso exacto de parse_map_spec (floats con repr)."""
    if isinstance(m, Dilation):
        return f"dilation:{format_complex(m.r)}"
    if isinstance(m, Automorphism):
        base = f"auto:{format_complex(m.beta)}"
        return base if m.eta == 1 else f"{base},{format_complex(m.eta)}"
    if isinstance(m, Lens):
        return f"lens:{m.delta!r}"
    if isinstance(m, SingularExp):
        return "exp"
    if isinstance(m, Polynomial):
        return "poly:" + ",".join(format_complex(c) for c in m.coeffs)
    raise MapSpecError(f"Variante desconocida: {type(m).__name__}")
