"""
quadrature.py — Cuadratura tensorial en el disco unitario.

Regla producto:
- Radial: Gauss-Legendre en t ∈ [0,1] con r = 1 - (1-t)^p, que agrupa
  nodos cerca de |z| = 1 (donde se concentra la masa de todas las
  integrales con pesos (1-|z|²)^α o (1-|φ|²)^{-α-4}).
- Angular: trapecio uniforme θ_j = 2πj/M (espectral para periódicas).

dA es la medida de Lebesgue normalizada (masa total 1), así que
    ∫ g dA ≈ Σ_i u_i · (1/M) Σ_j g(r_i e^{iθ_j}),  con u_i ya incluyendo 2r.

Uso:
    from dphi.core.quadrature import DiskQuadrature, integrate_disk
    q = DiskQuadrature.build(256, 512)
    integrate_disk(lambda z: np.abs(z) ** 2, "plain", q)   # ≈ 0.5
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal, Union

import numpy as np
from scipy.special import roots_legendre

from dphi.core.errors import DomainError, QuadratureError

Measure = Union[float, Literal["plain"]]
GridFunction = Callable[[np.ndarray], np.ndarray]


def _gauss_unit(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodos y pesos Gauss-Legendre en [0, 1]."""
    x, w = roots_legendre(n)
    return (x + 1.0) / 2.0, w / 2.0


def _clustered_toward_one(n: int, p: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodos s ∈ (0,1) agrupados hacia 1: s = 1 - (1-t)^p, con ds/dt."""
    t, w = _gauss_unit(n)
    s = 1.0 - (1.0 - t) ** p
    return s, w * p * (1.0 - t) ** (p - 1.0)


@dataclass(frozen=True, eq=False)
class DiskQuadrature:
    """
    Regla tensorial en el disco.

    Campos:
        radii: Nodos radiales r_i, todos < 1.
        radial_weights: u_i tales que Σ u_i h(r_i) ≈ ∫_0^1 h(r) 2r dr.
        angular: Número M de nodos angulares.
        cluster_exponent: Exponente p del cambio r = 1 - (1-t)^p.
        split: Radio b donde se partio la regla radial (o None).
    """

    radii: np.ndarray
    radial_weights: np.ndarray
    angular: int
    cluster_exponent: float = 2.0
    split: float | None = None
    _grid: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        theta = 2.0 * np.pi * np.arange(self.angular) / self.angular
        grid = self.radii[:, None] * np.exp(1j * theta)[None, :]
        object.__setattr__(self, "_grid", grid)

    @classmethod
    def build(
        cls,
        radial: int = 256,
        angular: int = 512,
        cluster_exponent: float = 2.0,
        split: float | None = None,
    ) -> DiskQuadrature:
        """
        Construye la regla.

        Con `split = b` los nodos radiales se reparten en [0,b] (agrupados
        hacia b) y en [b,1) (agrupados hacia 1). Sirve cuando el integrando
        tiene un quiebre en |w| = b, como N_φ,α de una dilatación.
        """
        if radial < 2 or angular < 1:
            raise DomainError(f"Resolución inválida: radial={radial}, angular={angular}")
        if cluster_exponent < 1.0:
            raise DomainError(f"cluster_exponent debe ser >= 1, recibido {cluster_exponent}")

        p = cluster_exponent
        if split is None:
            r, dr = _clustered_toward_one(radial, p)
        else:
            if not 0.0 < split < 1.0:
                raise DomainError(f"split debe estar en (0,1), recibido {split}")
            n_in = max(radial // 2, 2)
            n_out = max(radial - n_in, 2)
            s_in, ds_in = _clustered_toward_one(n_in, p)
            s_out, ds_out = _clustered_toward_one(n_out, p)
            r = np.concatenate([split * s_in, split + (1.0 - split) * s_out])
            dr = np.concatenate([split * ds_in, (1.0 - split) * ds_out])

        r = np.minimum(r, np.nextafter(1.0, 0.0))
        return cls(
            radii=r,
            radial_weights=dr * 2.0 * r,
            angular=angular,
            cluster_exponent=p,
            split=split,
        )

    @classmethod
    def from_config(cls, quad_config, split: float | None = None) -> DiskQuadrature:
        """Construye desde la sección `quad` de AppConfig."""
        return cls.build(
            radial=quad_config.radial,
            angular=quad_config.angular,
            cluster_exponent=quad_config.cluster_exponent,
            split=split,
        )

    @property
    def nodes(self) -> np.ndarray:
        """Malla compleja (radial × angular)."""
        return self._grid

    @property
    def shape(self) -> tuple[int, int]:
        return self._grid.shape


def integrate_disk(g: GridFunction, measure_alpha: Measure, q: DiskQuadrature) -> float:
    """
    ∫_D g dA_α (o dA si measure_alpha == "plain").

    Args:
        g: Función vectorizada; recibe la malla compleja y devuelve
            un arreglo real (o complejo) de la misma forma.
        measure_alpha: Exponente α > -1 del peso (1-|z|²)^α, o "plain".
        q: Regla de cuadratura.

    Raises:
        QuadratureError: Si g no es finita en algún nodo.
    """
    values = np.asarray(g(q.nodes))
    if values.shape != q.shape:
        values = np.broadcast_to(values, q.shape)

    bad = ~np.isfinite(values)
    if bad.any():
        idx = np.argwhere(bad)[0]
        node = complex(q.nodes[tuple(idx)])
        raise QuadratureError(f"Integrando no finito en el nodo z={node:.6g}", node=node)

    weights = q.radial_weights
    if measure_alpha != "plain":
        a = float(measure_alpha)
        if a <= -1.0:
            raise DomainError(f"El exponente de la medida debe ser > -1, recibido {a}")
        weights = weights * (1.0 - q.radii ** 2) ** a

    ring_means = values.mean(axis=1)
    total = np.sum(weights * ring_means)
    return float(np.real(total))
