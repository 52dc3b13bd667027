"""
test_quadrature.py — Tests para la cuadratura en el disco.

Verifica momentos exactos contra dA y dA_α, la regla partida y los
errores ante integrandos no finitos.
"""

from __future__ import annotations

import numpy as np
import pytest
from scipy.special import beta as beta_fn

from dphi.config import QuadConfig
from dphi.core.errors import DomainError, QuadratureError
from dphi.core.quadrature import DiskQuadrature, integrate_disk


@pytest.fixture
def q():
    return DiskQuadrature.build(128, 64)


class TestDiskQuadrature:
    def test_forma_de_la_malla(self, q):
        assert q.shape == (128, 64)
        assert q.nodes.shape == (128, 64)

    def test_radios_dentro_del_disco(self, q):
        assert np.all(q.radii > 0.0)
        assert np.all(q.radii < 1.0)

    def test_resolucion_invalida(self):
        with pytest.raises(DomainError):
            DiskQuadrature.build(1, 8)

    def test_split_invalido(self):
        with pytest.raises(DomainError):
            DiskQuadrature.build(64, 8, split=1.0)

    def test_split_reparte_nodos(self):
        qs = DiskQuadrature.build(64, 8, split=0.5)
        assert np.sum(qs.radii < 0.5) == 32
        assert np.all(np.diff(qs.radii) > 0)

    def test_from_config(self):
        qc = DiskQuadrature.from_config(QuadConfig(radial=32, angular=16))
        assert qc.shape == (32, 16)


class TestIntegrateDisk:
    def test_area_normalizada(self, q):
        assert integrate_disk(lambda z: np.ones(z.shape), "plain", q) == pytest.approx(1.0, abs=1e-13)

    def test_momento_plano(self, q):
        """∫|z|² dA = 1/2."""
        assert integrate_disk(lambda z: np.abs(z) ** 2, "plain", q) == pytest.approx(0.5, abs=1e-13)

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
    def test_momento_con_peso(self, q, alpha):
        """∫|z|^{2k} dA_α = B(k+1, α+1)."""
        for k in (0, 1, 3):
            got = integrate_disk(lambda z: np.abs(z) ** (2 * k), alpha, q)
            assert got == pytest.approx(beta_fn(k + 1, alpha + 1), rel=1e-8)

    def test_regla_partida_misma_integral(self):
        qs = DiskQuadrature.build(128, 16, split=0.3)
        assert integrate_disk(lambda z: np.abs(z) ** 4, "plain", qs) == pytest.approx(1 / 3, abs=1e-13)

    def test_funciones_angulares_se_anulan(self, q):
        assert integrate_disk(lambda z: z, "plain", q) == pytest.approx(0.0, abs=1e-13)

    def test_integrando_no_finito(self, q):
        with pytest.raises(QuadratureError) as info:
            integrate_disk(lambda z: np.full(z.shape, np.nan), "plain", q)
        assert info.value.node is not None

    def test_exponente_de_medida_invalido(self, q):
        with pytest.raises(DomainError):
            integrate_disk(lambda z: np.ones(z.shape), -1.0, q)

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
    def test_converge_al_duplicar_nodos(self, alpha):
        def one(z):
            return np.ones(z.shape)

        coarse = integrate_disk(one, alpha, DiskQuadrature.build(128, 16))
        fine = integrate_disk(one, alpha, DiskQuadrature.build(256, 32))
        assert abs(fine - coarse) < 1e-8
