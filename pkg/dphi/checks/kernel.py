"""
kernel.py — Propiedades reproductoras de k_w y k_w^{(1)}.

<f, k_w> = f(w) y <f, k_w^{(1)}> = f′(w) para polinomios aleatorios
(semilla fija) de grado <= 20 y puntos |w| <= 0.8.
"""

from __future__ import annotations

from typing import Any, Callable

import numpy as np

from dphi.checks.base import BaseCheck, CheckResult
from dphi.core.series import PowerSeries, derive, evaluate
from dphi.core.space import SpaceParams, dkernel, inner, kernel


def _random_cases(
    seed: int, n_polys: int, n_points: int, max_degree: int, max_radius: float
) -> tuple[list[PowerSeries], np.ndarray]:
    rng = np.random.default_rng(seed)
    polys = []
    for _ in range(n_polys):
        degree = int(rng.integers(0, max_degree + 1))
        coeffs = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
        polys.append(PowerSeries.from_coeffs(coeffs))
    radius = max_radius * np.sqrt(rng.uniform(0.0, 1.0, n_points))
    points = radius * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, n_points))
    return polys, points


class _ReproducingCheck(BaseCheck):
    """Base comun: recorre polinomios × puntos y guarda el peor error."""

    _kernel: Callable[[complex, SpaceParams, int], PowerSeries]
    _derivative: bool

    @property
    def suite(self) -> str:
        return "kernel"

    def execute(
        self,
        alpha: float = 0.5,
        seed: int = 0,
        n_polys: int = 50,
        n_points: int = 50,
        max_degree: int = 20,
        max_radius: float = 0.8,
        tol: float = 1e-10,
        **_: Any,
    ) -> CheckResult:
        p = SpaceParams(alpha)
        polys, points = _random_cases(seed, n_polys, n_points, max_degree, max_radius)

        worst = 0.0
        for f in polys:
            target = derive(f) if self._derivative else f
            expected = evaluate(target, points)
            # order = grado de f: el producto interno es exacto
            got = np.array([inner(f, self._kernel(w, p, f.order), p) for w in points])
            worst = max(worst, float(np.max(np.abs(got - expected))))

        details = {"alpha": alpha, "worst": worst, "tol": tol, "cases": n_polys * n_points}
        if worst > tol:
            return CheckResult(success=False, error=f"Error {worst:.3e} > {tol:g}", details=details)
        return CheckResult(success=True, output=f"peor error {worst:.3e}", details=details)


class ReproducingKernelCheck(_ReproducingCheck):
    name = "kernel_reproducing"
    description = "<f, k_w> = f(w)"
    _kernel = staticmethod(kernel)
    _derivative = False


class DerivativeKernelCheck(_ReproducingCheck):
    name = "kernel_derivative"
    description = "<f, k_w^(1)> = f'(w)"
    _kernel = staticmethod(dkernel)
    _derivative = True
