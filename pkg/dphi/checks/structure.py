"""
structure.py — Identidades estructurales exactas.

- Identidad del disco para automorfismos
- Entradas de la matriz subdiagonal de la dilatación
- Normalidad de la base e_n
- Convergencia de la norma truncada a la norma cerrada de la dilatación
"""

from __future__ import annotations

from typing import Any, Sequence

import numpy as np

from dphi.checks.base import BaseCheck, CheckResult
from dphi.config import AppConfig
from dphi.core.errors import ConvergenceError
from dphi.core.maps import SCREEN_POINTS, SCREEN_RADIUS, Automorphism, Dilation, eval_map
from dphi.core.operator import basis_e, build_matrix, closed_form_dilation_norm, operator_norm
from dphi.core.space import SpaceParams, dirichlet_norm
from dphi.utils.logger import get_logger

logger = get_logger("dphi.checks.structure")

DEFAULT_ALPHAS: tuple[float, ...] = (0.25, 0.5, 0.75)


def _result(worst: float, tol: float, label: str, details: dict[str, Any]) -> CheckResult:
    details = {**details, "worst": worst, "tol": tol}
    if worst > tol:
        return CheckResult(success=False, error=f"{label}: {worst:.3e} > {tol:g}", details=details)
    return CheckResult(success=True, output=f"{label}: {worst:.3e}", details=details)


class AutomorphismIdentityCheck(BaseCheck):
    """1 - |φ_β(w)|² = (1 - |β|²)(1 - |w|²) / |1 - conj(β) w|²."""

    name = "automorphism_identity"
    description = "Identidad del disco para φ_β"
    suite = "structure"

    def execute(
        self,
        betas: Sequence[complex] = (0.3, 0.5j, -0.7 + 0.1j),
        seed: int = 0,
        tol: float = 1e-12,
        **_: Any,
    ) -> CheckResult:
        rng = np.random.default_rng(seed)
        radius = SCREEN_RADIUS * np.sqrt(rng.uniform(0.0, 1.0, SCREEN_POINTS))
        w = radius * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, SCREEN_POINTS))

        worst = 0.0
        for beta in betas:
            m = Automorphism(beta)
            direct = 1.0 - np.abs(eval_map(m, w)) ** 2
            b = complex(beta)
            exact = (1.0 - abs(b) ** 2) * (1.0 - np.abs(w) ** 2) / np.abs(1.0 - np.conj(b) * w) ** 2
            worst = max(worst, float(np.max(np.abs(direct - exact))))
        return _result(worst, tol, "max |diferencia|", {"betas": [str(b) for b in betas]})


class DilationMatrixCheck(BaseCheck):
    """Matriz de D_φ para φ = rz: solo subdiagonal, con entradas cerradas."""

    name = "dilation_matrix"
    description = "Entradas n^{(3-α)/2}(n+1)^{(α-1)/2} r^{n-1}"
    suite = "structure"

    def execute(
        self,
        radii: Sequence[float] = (0.5, 0.25),
        alphas: Sequence[float] = DEFAULT_ALPHAS,
        order: int = 40,
        tol: float = 1e-14,
        **_: Any,
    ) -> CheckResult:
        worst = 0.0
        n = np.arange(1, order + 1, dtype=float)
        for r in radii:
            for alpha in alphas:
                mat = build_matrix(Dilation(r), SpaceParams(alpha), order, order).entries
                expected = n ** ((3.0 - alpha) / 2.0) * (n + 1.0) ** ((alpha - 1.0) / 2.0) * r ** (n - 1.0)
                sub = np.diag(mat, k=1)
                worst = max(worst, float(np.max(np.abs(sub - expected) / expected)))
                off = mat.copy()
                idx = np.arange(order)
                off[idx, idx + 1] = 0.0
                worst = max(worst, float(np.max(np.abs(off))))
        return _result(worst, tol, "max error relativo", {"order": order})


class BasisNormalityCheck(BaseCheck):
    """‖e_n‖ = 1 para n <= max_index."""

    name = "basis_normality"
    description = "dirichlet_norm(e_n) = 1"
    suite = "structure"

    def execute(
        self,
        alphas: Sequence[float] = DEFAULT_ALPHAS,
        max_index: int = 100,
        tol: float = 1e-14,
        **_: Any,
    ) -> CheckResult:
        worst = 0.0
        for alpha in alphas:
            p = SpaceParams(alpha)
            for k in range(max_index + 1):
                worst = max(worst, abs(dirichlet_norm(basis_e(k, p), p) - 1.0))
        return _result(worst, tol, "max |‖e_n‖ - 1|", {"max_index": max_index})


class GalerkinConvergenceCheck(BaseCheck):
    """|operator_norm(N) - norma cerrada| para dilataciones."""

    name = "galerkin_dilation"
    description = "Norma truncada vs norma cerrada de la dilatación"
    suite = "structure"

    def __init__(self, config: AppConfig | None = None) -> None:
        self._config = config if config is not None else AppConfig()

    def execute(
        self,
        radii: Sequence[float] = (0.3, 0.5, 0.7, 0.85),
        alphas: Sequence[float] = DEFAULT_ALPHAS,
        order: int | None = None,
        tol: float = 1e-6,
        **_: Any,
    ) -> CheckResult:
        ops = self._config.operator
        N = order if order is not None else ops.norm_order
        gaps: dict[str, float] = {}
        for r in radii:
            for alpha in alphas:
                p = SpaceParams(alpha)
                mat = build_matrix(Dilation(r), p, N, N, ops.max_matrix_entries,
                                   self._config.series.max_order)
                try:
                    value = operator_norm(mat, ops.power_tol, ops.power_max_iter)
                except ConvergenceError as e:
                    logger.warning(f"r={r}, alpha={alpha}: {e}")
                    value = float(e.last_value)
                gaps[f"r={r},alpha={alpha}"] = abs(value - closed_form_dilation_norm(r, p).norm)
        worst = max(gaps.values())
        return _result(worst, tol, f"max gap (N={N})", {"gaps": gaps, "order": N})
