"""
test_counting.py — Tests para la función de conteo N_φ,α.

Verifica:
- Ruta univalente (dilatación, automorfismo, lente, grado 1)
- Ruta de raíces de polinomios, con multiplicidad y frontera ambigua
- Serie del mapeo exponencial contra suma directa
- Versión vectorizada contra la escalar
- Cambio de variable, submedia e identidad de conjugación
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from dphi.config import CountingConfig
from dphi.core.counting import (
    ROUTE_EXP,
    ROUTE_POLYNOMIAL,
    ROUTE_UNIVALENT,
    conjugation_band_check,
    counting,
    counting_exp,
    counting_exp_full,
    counting_grid,
    counting_polynomial,
    counting_univalent,
    cov_residual,
    polynomial_roots,
    submean_constant,
)
from dphi.core.errors import DivergentSeriesError, DomainError
from dphi.core.maps import Automorphism, Dilation, Lens, Polynomial, SingularExp, eval_map
from dphi.core.quadrature import DiskQuadrature
from dphi.core.space import SpaceParams


@pytest.fixture
def p():
    return SpaceParams(0.5)


SQUARE = Polynomial((0.0, 0.0, 1.0))
QUADRATIC = Polynomial((0.0, 0.9, 0.05))


# ================================================================
# Raíces
# ================================================================

class TestPolynomialRoots:
    @pytest.mark.parametrize("method", ["companion", "aberth"])
    def test_raices_de_z2_menos_cuarto(self, method):
        roots, residual = polynomial_roots([-0.25, 0, 1], method)
        np.testing.assert_allclose(np.sort(roots.real), [-0.5, 0.5], atol=1e-12)
        assert residual < 1e-12

    def test_metodo_desconocido(self):
        with pytest.raises(DomainError):
            polynomial_roots([1, 1], "newton")

    def test_grado_cero(self):
        with pytest.raises(DomainError):
            polynomial_roots([1, 0, 0])


# ================================================================
# Rutas escalares
# ================================================================

class TestCountingScalar:
    def test_cuadrado(self, p):
        """N_{z²}(1/4) = 2·(3/4)^{1/2} = √3."""
        sample = counting(SQUARE, p, 0.25)
        assert sample.value == pytest.approx(math.sqrt(3.0), abs=1e-12)
        assert sample.route == ROUTE_POLYNOMIAL
        assert len(sample.preimages) == 2

    def test_cuadrado_cuenta_las_dos_raices(self, p):
        """Para z² el conteo es la suma sobre ±sqrt(w), en 100 puntos al azar."""
        rng = np.random.default_rng(5)
        radii = 0.9 * np.sqrt(rng.uniform(0.01, 1.0, 100))
        ws = radii * np.exp(2j * np.pi * rng.uniform(size=100))
        for w in ws:
            root = np.sqrt(w)
            expected = (1 - abs(root) ** 2) ** 0.5 + (1 - abs(-root) ** 2) ** 0.5
            assert counting(SQUARE, p, complex(w)).value == pytest.approx(expected, rel=1e-10)

    def test_dilatacion(self, p):
        sample = counting(Dilation(0.5), p, 0.25)
        assert sample.value == pytest.approx(0.75 ** 0.5)
        assert sample.route == ROUTE_UNIVALENT

    def test_dilatacion_fuera_de_la_imagen(self, p):
        assert counting(Dilation(0.5), p, 0.6).value == 0.0

    def test_automorfismo(self, p):
        m = Automorphism(0.3 + 0.2j)
        w = 0.4 - 0.1j
        expected = (1.0 - abs(eval_map(m, w)) ** 2) ** 0.5
        assert counting(m, p, w).value == pytest.approx(expected, rel=1e-12)

    def test_grado_uno(self, p):
        sample = counting(Polynomial((0.1, 0.5)), p, 0.3)
        assert sample.value == pytest.approx(0.84 ** 0.5)

    def test_lente_fuera_de_la_imagen(self, p):
        assert counting(Lens(0.1), p, 0.9j).value == 0.0

    def test_lente_dentro_de_la_imagen(self, p):
        m = Lens(0.3)
        z = 0.4 + 0.1j
        sample = counting_univalent(m, p, eval_map(m, z))
        assert sample.value == pytest.approx((1 - abs(z) ** 2) ** 0.5, rel=1e-10)

    def test_rechaza_valor_en_origen(self, p):
        with pytest.raises(DomainError):
            counting(Dilation(0.5), p, 0.0)

    def test_rechaza_fuera_del_disco(self, p):
        with pytest.raises(DomainError):
            counting(SQUARE, p, 1.0)

    def test_univalente_rechaza_no_univalente(self, p):
        with pytest.raises(DomainError):
            counting_univalent(SingularExp(), p, 0.5)

    def test_raiz_en_la_frontera(self, p):
        sample = counting_polynomial(SQUARE, p, 1.0 - 1e-10, CountingConfig())
        assert sample.boundary_ambiguous
        assert sample.value == 0.0

    def test_aberth_coincide(self, p):
        cfg = CountingConfig(root_method="aberth")
        w = 0.3 + 0.2j
        assert counting(QUADRATIC, p, w, cfg).value == pytest.approx(counting(QUADRATIC, p, w).value, rel=1e-10)

    def test_to_record(self, p):
        record = counting(SQUARE, p, 0.25).to_record()
        assert record["route"] == ROUTE_POLYNOMIAL
        assert len(record["preimages"]) == 2


# ================================================================
# Mapeo exponencial
# ================================================================

def _exp_brute(w: float, alpha: float, K: int = 200_000) -> float:
    L = math.log(w)
    a, b, c = -4 * L, (L - 1) ** 2, 4 * math.pi ** 2
    k = np.arange(K + 1, dtype=float)
    head = float(np.sum((a / (b + c * k ** 2)) ** alpha))
    tail = (a / c) ** alpha * (K + 0.5) ** (1 - 2 * alpha) / (2 * alpha - 1)
    return head + tail


class TestCountingExp:
    @pytest.mark.parametrize("w", [0.5, 0.9, 0.999])
    def test_contra_suma_directa(self, w):
        p = SpaceParams(0.75)
        sample = counting_exp(p, w)
        assert sample.route == ROUTE_EXP
        assert sample.value == pytest.approx(_exp_brute(w, 0.75), rel=1e-8)

    def test_ignora_argumento(self):
        p = SpaceParams(0.75)
        assert counting_exp(p, 0.5j).value == pytest.approx(counting_exp(p, 0.5).value)

    def test_version_completa_en_real_positivo(self):
        """Con arg w = 0 la suma sobre ℤ es 2·(k ≥ 0) menos el término k = 0."""
        p = SpaceParams(0.75)
        L = math.log(0.5)
        k0 = (-4 * L / (L - 1) ** 2) ** 0.75
        full = counting_exp_full(p, 0.5).value
        assert full == pytest.approx(2 * counting_exp(p, 0.5).value - k0, rel=1e-9)

    def test_diverge_para_alpha_chico(self, p):
        with pytest.raises(DivergentSeriesError):
            counting_exp(p, 0.5)

    def test_w_cero(self):
        with pytest.raises(DomainError):
            counting_exp(SpaceParams(0.75), 0.0)

    def test_despachador_rechaza_phi_de_cero(self):
        with pytest.raises(DomainError):
            counting(SingularExp(), SpaceParams(0.75), math.exp(-1.0))


# ================================================================
# Versión vectorizada
# ================================================================

class TestCountingGrid:
    @pytest.mark.parametrize("m", [SQUARE, QUADRATIC, Dilation(0.5), Lens(0.2), Automorphism(0.3)])
    def test_coincide_con_escalar(self, p, m):
        ws = np.array([0.25, 0.1 + 0.3j, -0.4j, 0.6 - 0.2j])
        values, flags = counting_grid(m, p, ws)
        assert values.shape == ws.shape
        assert not flags.any()
        for w, v in zip(ws, values):
            assert v == pytest.approx(counting(m, p, w).value, rel=1e-10, abs=1e-14)

    def test_exp(self):
        p = SpaceParams(0.75)
        ws = np.array([0.5, 0.5j, 0.9])
        values, _ = counting_grid(SingularExp(), p, ws)
        assert values[0] == pytest.approx(values[1])
        assert values[2] == pytest.approx(counting_exp(p, 0.9).value)


# ================================================================
# Cambio de variable y evidencias
# ================================================================

class TestChangeOfVariable:
    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_dilatacion(self, alpha, k):
        q = DiskQuadrature.build(128, 32)
        assert cov_residual(Dilation(0.5), SpaceParams(alpha), k, q) <= 1e-3

    @pytest.mark.parametrize("alpha", [0.25, 0.75])
    def test_cuadrado(self, alpha):
        q = DiskQuadrature.build(128, 32)
        assert cov_residual(SQUARE, SpaceParams(alpha), 1, q) <= 1e-3

    def test_cuadratico(self, p):
        q = DiskQuadrature.build(256, 512)
        assert cov_residual(QUADRATIC, p, 0, q) <= 1e-3

    def test_rechaza_lente(self, p):
        with pytest.raises(DomainError):
            cov_residual(Lens(0.1), p, 0, DiskQuadrature.build(16, 16))

    def test_exponente_negativo(self, p):
        with pytest.raises(DomainError):
            cov_residual(SQUARE, p, -1, DiskQuadrature.build(16, 16))


class TestEvidencias:
    def test_submedia(self, p):
        c = submean_constant(SQUARE, p, [0.3, 0.5j])
        assert 0.5 < c < 2.0

    def test_banda_de_conjugacion(self, p):
        result = conjugation_band_check(SQUARE, 0.3, p, [0.1, 0.5j, -0.4 + 0.2j, 0.7])
        assert result["ok"]
        assert result["samples"] == 4
        low, high = result["band"]
        assert low <= result["min_ratio"] <= result["max_ratio"] <= high
