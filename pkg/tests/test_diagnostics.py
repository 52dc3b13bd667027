"""
test_diagnostics.py — Tests para los diagnósticos de acotamiento y compacidad.

Verifica:
- El funcional B y su versión en la variable de origen
- La regla de tendencia (pendiente log-log en las capas externas)
- La matriz de clasificación: dilatación, lentes, automorfismo, exp
- Monotonía en α, norma esencial y ‖φ‖_∞ < 1
"""

from __future__ import annotations

import math
import re

import numpy as np
import pytest

from dphi.config import DiagnosticsConfig
from dphi.core.diagnostics import (
    ROUTE_SOURCE,
    ROUTE_TARGET,
    TREND_DECAYING,
    TREND_DIVERGING,
    TREND_INCONCLUSIVE,
    TREND_PLATEAU,
    b_functional,
    classify_trend,
    default_shells,
    essential_norm_bracket,
    monotonicity_check,
    radial_lower_profile,
    radial_profile,
    small_supnorm_compactness,
    univalent_b,
)
from dphi.core.errors import DomainError, ResourceLimitError
from dphi.core.maps import Automorphism, Dilation, Lens, Polynomial, SingularExp, eval_map
from dphi.core.space import SpaceParams
from dphi.utils.validators import validate_shells


@pytest.fixture
def p():
    return SpaceParams(0.5)


def _samples(values):
    """Capas 1 - 2^{-k}, k = 9..14, con los máximos dados."""
    return [(1.0 - 2.0 ** -k, v) for k, v in zip(range(9, 15), values)]


# ================================================================
# Funcional B
# ================================================================

class TestBFunctional:
    def test_valor_de_dilatacion(self, p):
        assert b_functional(Dilation(0.5), p, 0.25) == pytest.approx(1.0176593818, abs=1e-9)

    def test_fuera_del_disco(self, p):
        with pytest.raises(DomainError):
            b_functional(Dilation(0.5), p, 1.0)

    def test_origen_coincide_con_destino(self, p):
        """univalent_b(w) = B(φ(w)) para automorfismos."""
        m = Automorphism(0.3 + 0.1j)
        for w in (0.2, 0.6j, -0.5 + 0.3j):
            expected = b_functional(m, p, eval_map(m, w))
            assert univalent_b(m, p, w) == pytest.approx(expected, rel=1e-10)

    @pytest.mark.parametrize("m", [Lens(0.1), Lens(0.3), Dilation(0.5), Dilation(0.9j)])
    def test_rutas_coinciden_en_malla(self, p, m):
        """univalent_b(w) = B(φ(w)) en 200 puntos (10 radios x 20 ángulos)."""
        radii = np.linspace(0.05, 0.9, 10)
        theta = 2 * np.pi * np.arange(20) / 20
        grid = (radii[:, None] * np.exp(1j * theta)[None, :]).reshape(-1)
        source = univalent_b(m, p, grid)
        target = [b_functional(m, p, complex(eval_map(m, w))) for w in grid]
        np.testing.assert_allclose(source, target, rtol=1e-8)

    def test_origen_requiere_univalente(self, p):
        with pytest.raises(DomainError):
            univalent_b(Polynomial((0.0, 0.0, 1.0)), p, 0.5)


# ================================================================
# Regla de tendencia
# ================================================================

class TestClassifyTrend:
    def test_decae(self):
        samples = [(r, (1 - r) ** 0.5) for r, _ in _samples([0] * 6)]
        trend, slope = classify_trend(samples)
        assert trend == TREND_DECAYING
        assert slope == pytest.approx(0.5)

    def test_diverge(self):
        samples = [(r, (1 - r) ** -2) for r, _ in _samples([0] * 6)]
        trend, slope = classify_trend(samples)
        assert trend == TREND_DIVERGING
        assert slope == pytest.approx(-2.0)

    def test_meseta(self):
        trend, _ = classify_trend(_samples([3.0] * 6))
        assert trend == TREND_PLATEAU

    def test_pendiente_nula_pero_dispersa(self):
        trend, slope = classify_trend(_samples([10, 1, 1, 1, 1, 10]))
        assert abs(slope) < 1e-9
        assert trend == TREND_INCONCLUSIVE

    def test_todo_cero(self):
        assert classify_trend(_samples([0.0] * 6)) == (TREND_DECAYING, None)

    def test_soporte_termina_en_la_ventana(self):
        trend, _ = classify_trend(_samples([5, 4, 3, 2, 1, 0]))
        assert trend == TREND_DECAYING

    def test_pocas_capas(self):
        assert classify_trend(_samples([1.0])) == (TREND_INCONCLUSIVE, None)

    def test_ignora_nan(self):
        values = [math.nan] + [(2.0 ** -k) ** -2 for k in range(10, 15)]
        trend, _ = classify_trend(_samples(values))
        assert trend == TREND_DIVERGING


# ================================================================
# Perfil radial y veredictos
# ================================================================

class TestRadialProfile:
    def test_capas_por_defecto(self):
        shells = default_shells()
        assert len(shells) == 14
        assert shells[-1] >= 1 - 1e-4

    def test_dilatacion_compacta(self, p):
        report = radial_profile(Dilation(0.5), p, points_per_shell=64)
        assert report.route == ROUTE_TARGET
        assert report.verdict == "compact-evidence"

    @pytest.mark.parametrize("r", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
    def test_barrido_de_dilataciones(self, r, alpha):
        report = radial_profile(Dilation(r), SpaceParams(alpha), points_per_shell=32)
        assert report.verdict == "compact-evidence"

    @pytest.mark.parametrize("delta", [0.05, 0.1, 0.15, 0.19])
    def test_lentes_compactas(self, p, delta):
        report = radial_profile(Lens(delta), p)
        assert report.route == ROUTE_SOURCE
        assert report.verdict == "compact-evidence"

    @pytest.mark.parametrize("delta", [0.25, 0.4])
    def test_lentes_no_compactas(self, p, delta):
        report = radial_profile(Lens(delta), p)
        assert report.verdict != "compact-evidence"

    def test_automorfismo_no_acotado(self, p):
        report = radial_profile(Automorphism(0.3), p)
        assert report.verdict == "unbounded-evidence"
        assert report.slope == pytest.approx(-2.0, abs=0.05)

    def test_exp_no_acotado(self):
        report = radial_profile(SingularExp(), SpaceParams(0.75), points_per_shell=16)
        assert report.verdict == "unbounded-evidence"
        assert report.samples[-1][1] > 1e3

    def test_todas_las_capas_fallan(self, p):
        """Con α ≤ 1/2 la serie del exp diverge en cada capa."""
        report = radial_profile(SingularExp(), p, points_per_shell=8)
        assert report.failures == len(report.samples)
        assert report.verdict == "inconclusive"
        assert math.isnan(report.sup_estimate)

    def test_capas_invalidas(self, p):
        with pytest.raises(DomainError):
            radial_profile(Dilation(0.5), p, shells=[0.5, 0.9])
        with pytest.raises(DomainError):
            radial_profile(Dilation(0.5), p, shells=[0.9, 0.5, 0.99999])

    def test_capas_usan_el_validador_del_cli(self, p):
        shells = [0.5, 0.99]
        ok, error = validate_shells(shells)
        assert not ok
        with pytest.raises(DomainError, match=re.escape(error)):
            radial_profile(Dilation(0.5), p, shells=shells)

    def test_registro(self, p):
        report = radial_profile(Dilation(0.5), p, points_per_shell=16)
        record = report.to_record()
        assert record["schema"] == 1
        assert record["map"] == "dilation:0.5"
        assert len(record["shells"]) == 14
        assert len(report.to_rows()) == 14


# ================================================================
# Monotonía, norma esencial, ‖φ‖_∞ < 1
# ================================================================

class TestEvidenciasExtra:
    @pytest.mark.parametrize("alpha, gamma", [(0.3, 0.7), (0.25, 0.75)])
    def test_monotonia(self, alpha, gamma):
        m = Polynomial((0.0, 0.0, 0.9))
        assert monotonicity_check(m, alpha, gamma) <= 1e-12

    def test_monotonia_requiere_origen_fijo(self):
        with pytest.raises(DomainError):
            monotonicity_check(Automorphism(0.3), 0.3, 0.7)

    def test_monotonia_orden_de_parametros(self):
        with pytest.raises(DomainError):
            monotonicity_check(Dilation(0.5), 0.7, 0.3)

    def test_norma_sup_pequena(self, p):
        assert small_supnorm_compactness(Dilation(0.5), p, points_per_shell=32)
        assert small_supnorm_compactness(Polynomial((0.0, 0.4, 0.2)), p, points_per_shell=32)
        assert small_supnorm_compactness(Polynomial((0.0, 0.4, 0.3)), p, points_per_shell=32)

    def test_norma_sup_uno(self, p):
        with pytest.raises(DomainError):
            small_supnorm_compactness(Automorphism(0.3), p)

    def test_perfil_inferior_decae(self, p):
        radii = [1 - 2.0 ** -k for k in range(1, 11)]
        profile = radial_lower_profile(Dilation(0.5), p, radii)
        assert profile[-1][1] < 1e-2
        assert profile[-1][1] < profile[2][1]

    def test_bracket_de_dilatacion(self, p):
        upper, lower = essential_norm_bracket(Dilation(0.5), p)
        assert upper == 0.0
        assert 0.0 <= lower < 1e-2

    def test_bracket_de_lente(self, p):
        diag = DiagnosticsConfig(test_radii_exponents=6)
        upper, lower = essential_norm_bracket(Lens(0.1), p, diag)
        assert 0.0 < upper < 0.5
        assert 0.0 < lower < 0.5
        radii = [1 - 2.0 ** -k for k in range(1, 7)]
        profile = radial_lower_profile(Lens(0.1), p, radii)
        assert profile[-1][1] < profile[0][1]

    def test_bracket_de_polinomio_casi_unitario(self, p):
        """φ = 0.99 z²: B se anula fuera de |w| = 0.99; la cota inferior converge a ≈ 6.76."""
        upper, lower = essential_norm_bracket(Polynomial((0.0, 0.0, 0.99)), p)
        assert upper == 0.0
        assert lower == pytest.approx(6.764, rel=2e-3)

    def test_bracket_respeta_max_order(self, p):
        """El radio 1 - 2^-10 pide orden 40960."""
        with pytest.raises(ResourceLimitError):
            essential_norm_bracket(Dilation(0.5), p, max_order=4096)

    def test_bracket_rechaza_automorfismo(self, p):
        with pytest.raises(DomainError):
            essential_norm_bracket(Automorphism(0.3), p)
