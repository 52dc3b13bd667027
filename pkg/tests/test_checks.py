"""
test_checks.py — Tests para el sistema de chequeos de verificación.

Verifica:
- CheckResult y BaseCheck
- CheckRegistry (registro, suites, errores convertidos en resultados)
- Que las suites kernel y structure pasen con sus parámetros
- El chequeo de cambio de variable con una cuadratura reducida
"""

from __future__ import annotations

from dphi.checks.base import BaseCheck, CheckResult
from dphi.checks.cov import CovResidualCheck
from dphi.checks.kernel import DerivativeKernelCheck, ReproducingKernelCheck
from dphi.checks.registry import CheckRegistry
from dphi.checks.structure import (
    AutomorphismIdentityCheck,
    BasisNormalityCheck,
    DilationMatrixCheck,
    GalerkinConvergenceCheck,
)
from dphi.config import AppConfig, QuadConfig


class _DummyCheck(BaseCheck):
    name = "dummy"
    description = "Chequeo de prueba"
    suite = "structure"

    def execute(self, value: float = 1.0, **_) -> CheckResult:
        return CheckResult(success=value > 0, output=f"value={value}")


class _FailingCheck(BaseCheck):
    name = "failing"
    description = "Siempre lanza"
    suite = "kernel"

    def execute(self, **_) -> CheckResult:
        raise ValueError("boom")


# ================================================================
# CheckResult y BaseCheck
# ================================================================

class TestCheckResult:
    def test_defaults(self):
        result = CheckResult(success=True)
        assert result.output == ""
        assert result.error == ""
        assert result.details == {}

    def test_to_record(self):
        assert _DummyCheck().to_record() == {
            "name": "dummy",
            "description": "Chequeo de prueba",
            "suite": "structure",
        }


# ================================================================
# CheckRegistry
# ================================================================

class TestCheckRegistry:
    def test_registra_y_ejecuta(self):
        registry = CheckRegistry()
        registry.register(_DummyCheck())
        result = registry.execute("dummy", {"value": 2.0})
        assert result.success
        assert result.output == "value=2.0"

    def test_chequeo_inexistente(self):
        registry = CheckRegistry()
        registry.register(_DummyCheck())
        result = registry.execute("no_existe")
        assert not result.success
        assert "dummy" in result.error

    def test_excepcion_se_convierte_en_fallo(self):
        registry = CheckRegistry()
        registry.register(_FailingCheck())
        result = registry.execute("failing")
        assert not result.success
        assert result.error == "ValueError: boom"

    def test_filtra_por_suite(self):
        registry = CheckRegistry()
        registry.register(_DummyCheck())
        registry.register(_FailingCheck())
        assert registry.list_checks("kernel") == ["failing"]
        assert registry.list_checks("all") == ["dummy", "failing"]

    def test_run_suite(self):
        registry = CheckRegistry()
        registry.register(_DummyCheck())
        registry.register(_FailingCheck())
        results = registry.run_suite("all")
        assert [name for name, _ in results] == ["dummy", "failing"]
        assert [r.success for _, r in results] == [True, False]

    def test_defaults(self):
        registry = CheckRegistry.with_defaults()
        assert registry.list_checks("cov") == ["cov_dilation", "cov_square", "cov_quadratic"]
        assert registry.list_checks("kernel") == ["kernel_reproducing", "kernel_derivative"]
        assert set(registry.list_checks("structure")) == {
            "automorphism_identity",
            "dilation_matrix",
            "basis_normality",
            "galerkin_dilation",
        }


# ================================================================
# Suites
# ================================================================

class TestKernelSuite:
    def test_reproductor(self):
        result = ReproducingKernelCheck().execute()
        assert result.success, result.error
        assert result.details["cases"] == 2500

    def test_derivada(self):
        result = DerivativeKernelCheck().execute(alpha=0.25)
        assert result.success, result.error

    def test_tolerancia_imposible_falla(self):
        result = ReproducingKernelCheck().execute(n_polys=5, n_points=5, tol=-1.0)
        assert not result.success


class TestStructureSuite:
    def test_automorfismo(self):
        assert AutomorphismIdentityCheck().execute().success

    def test_matriz_de_dilatacion(self):
        assert DilationMatrixCheck().execute().success

    def test_base_normal(self):
        assert BasisNormalityCheck().execute().success

    def test_galerkin(self):
        result = GalerkinConvergenceCheck().execute(radii=(0.5,), alphas=(0.5,))
        assert result.success, result.error
        assert result.details["order"] == 200


class TestCovSuite:
    def test_dilatacion_con_cuadratura_reducida(self):
        config = AppConfig(quad=QuadConfig(radial=128, angular=32))
        result = CovResidualCheck("cov_dilation", "dilation:0.5", config).execute()
        assert result.success, result.error
        assert len(result.details["residuals"]) == 9

    def test_umbral_negativo_falla(self):
        config = AppConfig(quad=QuadConfig(radial=64, angular=16))
        check = CovResidualCheck("cov_dilation", "dilation:0.5", config)
        result = check.execute(alphas=(0.5,), exponents=(0,), threshold=-1.0)
        assert not result.success
        assert result.details["worst_case"] == "alpha=0.5,m=0"
