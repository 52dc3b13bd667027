"""
registry.py — Registro central de chequeos de verificación.

Registra, agrupa por suite y ejecuta chequeos. execute() nunca lanza:
cualquier excepción se convierte en un CheckResult fallido.

Uso:
    from dphi.checks.registry import CheckRegistry
    registry = CheckRegistry.with_defaults(config)
    results = registry.run_suite("cov")
"""

from __future__ import annotations

from typing import Any

from dphi.checks.base import BaseCheck, CheckResult
from dphi.config import AppConfig
from dphi.utils.logger import get_logger

logger = get_logger("dphi.checks.registry")


class CheckRegistry:
    """Registro central de chequeos disponibles."""

    def __init__(self) -> None:
        self._checks: dict[str, BaseCheck] = {}

    def register(self, check: BaseCheck) -> None:
        """Registra un chequeo (un nombre repetido reemplaza al anterior)."""
        self._checks[check.name] = check
        logger.debug(f"Chequeo registrado: {check.name} ({check.suite})")

    def get(self, name: str) -> BaseCheck | None:
        return self._checks.get(name)

    def list_checks(self, suite: str | None = None) -> list[str]:
        """Nombres registrados, opcionalmente filtrados por suite."""
        if suite in (None, "all"):
            return list(self._checks.keys())
        return [name for name, c in self._checks.items() if c.suite == suite]

    def execute(self, name: str, params: dict[str, Any] | None = None) -> CheckResult:
        """
        Ejecuta un chequeo por nombre.

        Returns:
            CheckResult; si el chequeo no existe o lanza, success=False.
        """
        check = self._checks.get(name)
        if not check:
            return CheckResult(
                success=False,
                error=f"Chequeo no encontrado: '{name}'. "
                f"Disponibles: {', '.join(self._checks.keys())}",
            )
        try:
            return check.execute(**(params or {}))
        except Exception as e:
            logger.error(f"Error ejecutando chequeo '{name}': {e}")
            return CheckResult(success=False, error=f"{type(e).__name__}: {e}")

    def run_suite(self, suite: str = "all") -> list[tuple[str, CheckResult]]:
        """Ejecuta todos los chequeos de una suite en orden de registro."""
        names = self.list_checks(suite)
        results = []
        for i, name in enumerate(names, start=1):
            logger.step(i, len(names), name)
            results.append((name, self.execute(name)))
        return results

    @classmethod
    def with_defaults(cls, config: AppConfig | None = None) -> CheckRegistry:
        """
        Registry con las tres suites: cov, kernel y structure.

        Args:
            config: AppConfig para resoluciones de cuadratura y
                órdenes de truncación (defaults si es None).
        """
        cfg = config if config is not None else AppConfig()
        registry = cls()

        # === cov: cambio de variable ===
        from dphi.checks.cov import CovResidualCheck

        registry.register(CovResidualCheck("cov_dilation", "dilation:0.5", cfg))
        registry.register(CovResidualCheck("cov_square", "poly:0,0,1", cfg))
        registry.register(CovResidualCheck("cov_quadratic", "poly:0,0.9,0.05", cfg))

        # === kernel: propiedades reproductoras ===
        from dphi.checks.kernel import DerivativeKernelCheck, ReproducingKernelCheck

        registry.register(ReproducingKernelCheck())
        registry.register(DerivativeKernelCheck())

        # === structure: identidades exactas ===
        from dphi.checks.structure import (
            AutomorphismIdentityCheck,
            BasisNormalityCheck,
            DilationMatrixCheck,
            GalerkinConvergenceCheck,
        )

        registry.register(AutomorphismIdentityCheck())
        registry.register(DilationMatrixCheck())
        registry.register(BasisNormalityCheck())
        registry.register(GalerkinConvergenceCheck(cfg))

        return registry
