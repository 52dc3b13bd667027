"""
cov.py — Chequeo del cambio de variable con la función de conteo.

Compara ∫ f(φ)|φ′|² dA_α con ∫ f N_φ,α dA para f(w) = (1 - |w|²)^m
sobre una grilla de α y exponentes m. Pasa si el peor residuo
relativo es <= threshold.
"""

from __future__ import annotations

from typing import Any, Sequence

from dphi.checks.base import BaseCheck, CheckResult
from dphi.config import AppConfig
from dphi.core.counting import cov_residual
from dphi.core.maps import parse_map_spec
from dphi.core.quadrature import DiskQuadrature
from dphi.core.space import SpaceParams
from dphi.utils.logger import get_logger

logger = get_logger("dphi.checks.cov")

DEFAULT_ALPHAS: tuple[float, ...] = (0.25, 0.5, 0.75)
DEFAULT_EXPONENTS: tuple[int, ...] = (0, 1, 2)
DEFAULT_THRESHOLD = 1e-3


class CovResidualCheck(BaseCheck):
    """Residuo del cambio de variable para un mapeo fijo."""

    def __init__(self, check_name: str, map_spec: str, config: AppConfig | None = None) -> None:
        self._name = check_name
        self._map_spec = map_spec
        self._config = config if config is not None else AppConfig()

    @property
    def name(self) -> str:
        return self._name

    @property
    def description(self) -> str:
        return f"Cambio de variable para {self._map_spec}"

    @property
    def suite(self) -> str:
        return "cov"

    def execute(
        self,
        alphas: Sequence[float] = DEFAULT_ALPHAS,
        exponents: Sequence[int] = DEFAULT_EXPONENTS,
        threshold: float = DEFAULT_THRESHOLD,
        **_: Any,
    ) -> CheckResult:
        m = parse_map_spec(self._map_spec)
        q = DiskQuadrature.from_config(self._config.quad)

        residuals: dict[str, float] = {}
        for alpha in alphas:
            p = SpaceParams(alpha)
            for k in exponents:
                residuals[f"alpha={alpha},m={k}"] = cov_residual(m, p, k, q, self._config.counting)

        worst_case = max(residuals, key=residuals.__getitem__)
        worst = residuals[worst_case]
        details = {
            "map": self._map_spec,
            "threshold": threshold,
            "worst": worst,
            "worst_case": worst_case,
            "residuals": residuals,
        }
        if worst > threshold:
            logger.warning(f"{self._name}: residuo {worst:.3e} en {worst_case}")
            return CheckResult(
                success=False,
                error=f"Residuo {worst:.3e} > {threshold:g} en {worst_case}",
                details=details,
            )
        return CheckResult(
            success=True,
            output=f"peor residuo {worst:.3e} ({len(residuals)} casos)",
            details=details,
        )
