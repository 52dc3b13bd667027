"""
test_validators.py — Tests para las validaciones del CLI.

Cada validador retorna (es_valido, mensaje); aquí solo se revisa el
contrato de la tupla y los límites de cada parámetro.
"""

import pytest

from dphi.utils.validators import (
    MIN_OUTER_SHELL,
    parse_shells,
    validate_alpha,
    validate_format,
    validate_order,
    validate_shells,
)


class TestValidateAlpha:
    @pytest.mark.parametrize("value", [0.25, 0.5, 0.75, "0.3", 1e-9])
    def test_validos(self, value):
        assert validate_alpha(value) == (True, "")

    @pytest.mark.parametrize("value", [0.0, 1.0, -0.5, 1.5, float("nan"), float("inf")])
    def test_fuera_del_intervalo(self, value):
        ok, error = validate_alpha(value)
        assert not ok
        assert "(0, 1)" in error

    def test_no_numerico(self):
        ok, error = validate_alpha("medio")
        assert not ok
        assert "número" in error


class TestValidateShells:
    def test_capas_validas(self):
        assert validate_shells([0.5, 0.9, 0.99999])[0]

    def test_vacia(self):
        assert not validate_shells([])[0]

    def test_no_crecientes(self):
        ok, error = validate_shells([0.5, 0.5, 0.99999])
        assert not ok
        assert "crecientes" in error

    def test_capa_final_corta(self):
        ok, error = validate_shells([0.5, 0.99])
        assert not ok
        assert str(MIN_OUTER_SHELL) in error

    def test_fuera_del_disco(self):
        assert not validate_shells([0.5, 1.0])[0]


class TestValidateOrder:
    def test_valido(self):
        assert validate_order(200, 4096) == (True, "")

    @pytest.mark.parametrize("order", [0, -3, 5000, 2.5, True])
    def test_invalidos(self, order):
        assert not validate_order(order, 4096)[0]

    def test_mensaje_con_tildes(self):
        ok, error = validate_order(5000, 4096)
        assert not ok
        assert "límite" in error
        assert "inválido" in validate_format("xml")[1]


class TestValidateFormat:
    @pytest.mark.parametrize("fmt", ["human", "json", "csv"])
    def test_validos(self, fmt):
        assert validate_format(fmt)[0]

    def test_invalido(self):
        ok, error = validate_format("xml")
        assert not ok
        assert "json" in error


class TestParseShells:
    def test_entero(self):
        shells, error = parse_shells("14")
        assert error == ""
        assert len(shells) == 14
        assert shells[0] == 0.5
        assert shells[-1] == 1 - 2 ** -14

    def test_entero_insuficiente(self):
        shells, error = parse_shells("10")
        assert shells is None
        assert "14" in error

    def test_lista(self):
        shells, _ = parse_shells("0.5, 0.9,0.99999")
        assert shells == [0.5, 0.9, 0.99999]

    def test_lista_invalida(self):
        assert parse_shells("0.5,abc")[0] is None
        assert parse_shells("0.9,0.5,0.99999")[0] is None
