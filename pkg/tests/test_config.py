"""
test_config.py — Tests para el módulo de configuración.

Verificamos que:
1. La configuración se carga correctamente desde config.yaml
2. Las variables de entorno se resuelven
3. Los valores por defecto funcionan cuando no hay archivo
4. Keys desconocidas se ignoran y los strings se convierten al tipo correcto
"""

from pathlib import Path
from unittest.mock import patch

from dphi.config import (
    AppConfig,
    DiagnosticsConfig,
    OperatorConfig,
    QuadConfig,
    _coerce,
    _dict_to_dataclass,
    _resolve_env_recursive,
    _resolve_env_vars,
    load_config,
)


class TestResolveEnvVars:
    """Tests para la resolución de variables de entorno."""

    def test_resuelve_variable_existente(self):
        with patch.dict("os.environ", {"MI_VAR": "hola"}):
            assert _resolve_env_vars("${MI_VAR}/logs") == "hola/logs"

    def test_mantiene_variable_inexistente(self):
        """Si la variable no existe, debe mantener el placeholder."""
        assert _resolve_env_vars("${NO_EXISTE_DPHI}") == "${NO_EXISTE_DPHI}"

    def test_resuelve_multiples_variables(self):
        with patch.dict("os.environ", {"A": "1", "B": "2"}):
            assert _resolve_env_vars("${A}-${B}") == "1-2"


class TestResolveEnvRecursive:
    def test_resuelve_en_dict_anidado(self):
        with patch.dict("os.environ", {"PATH_VAR": "/mi/path"}):
            datos = {"nivel1": {"nivel2": "${PATH_VAR}"}}
            assert _resolve_env_recursive(datos)["nivel1"]["nivel2"] == "/mi/path"

    def test_resuelve_en_lista(self):
        with patch.dict("os.environ", {"VAL": "ok"}):
            assert _resolve_env_recursive(["${VAL}", "fijo"]) == ["ok", "fijo"]

    def test_no_modifica_numeros(self):
        assert _resolve_env_recursive(42) == 42


class TestAppConfig:
    """Valores por defecto de cada sección."""

    def test_valores_por_defecto(self):
        config = AppConfig()
        assert config.quad.radial == 256
        assert config.quad.angular == 512
        assert config.operator.norm_order == 200
        assert config.operator.power_tol == 1e-12
        assert config.diagnostics.shell_exponents == 14
        assert config.diagnostics.slope_tol == 0.05
        assert config.counting.root_method == "companion"
        assert config.output.format == "human"

    def test_to_dict(self):
        data = AppConfig().to_dict()
        assert set(data) == {"series", "quad", "operator", "counting", "diagnostics", "output"}
        assert data["operator"]["hs_terms"] == 2000


class TestDictToDataclass:
    def test_ignora_keys_desconocidas(self):
        quad = _dict_to_dataclass({"radial": 64, "nueva_key": 1}, QuadConfig)
        assert quad.radial == 64
        assert quad.angular == 512

    def test_convierte_strings(self):
        op = _dict_to_dataclass({"power_tol": "1e-10", "norm_order": "50"}, OperatorConfig)
        assert op.power_tol == 1e-10
        assert op.norm_order == 50

    def test_coerce_no_toca_no_strings(self):
        assert _coerce(3, 1.0) == 3
        assert _coerce("companion", "aberth") == "companion"

    def test_seccion_vacia(self):
        assert _dict_to_dataclass(None, DiagnosticsConfig) == DiagnosticsConfig()


class TestLoadConfig:
    """Tests para la función load_config."""

    def test_carga_sin_archivo(self, tmp_path):
        """Si no hay config.yaml, debe usar valores por defecto."""
        with patch("dphi.config._find_config_dir", return_value=tmp_path), \
                patch.dict("os.environ", {}, clear=False) as env:
            env.pop("DPHI_CONFIG", None)
            config = load_config()
        assert config == AppConfig()

    def test_carga_archivo_parcial(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text("quad:\n  radial: 64\noperator:\n  norm_order: 40\n", encoding="utf-8")
        config = load_config(path)
        assert config.quad.radial == 64
        assert config.operator.norm_order == 40
        assert config.quad.angular == 512

    def test_resuelve_env_en_yaml(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text('output:\n  log_dir: "${DPHI_TEST_LOGS}"\n', encoding="utf-8")
        with patch.dict("os.environ", {"DPHI_TEST_LOGS": "/tmp/dphi-logs"}):
            config = load_config(path)
        assert config.output.log_dir == "/tmp/dphi-logs"

    def test_config_del_repo(self):
        """El config.yaml versionado coincide con los defaults."""
        repo_config = Path(__file__).resolve().parent.parent / "config.yaml"
        config = load_config(repo_config)
        assert config.quad == AppConfig().quad
        assert config.operator == AppConfig().operator
        assert config.diagnostics == AppConfig().diagnostics
        assert config.output == AppConfig().output
