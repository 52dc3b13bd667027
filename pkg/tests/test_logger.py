"""
test_logger.py — Tests para el logger dual (rich + archivo).
"""

import logging
from pathlib import Path
from unittest.mock import patch

from dphi.utils.logger import (
    ROOT_LOGGER,
    _resolve_log_dir,
    configure_file_logging,
    get_logger,
)


class TestResolveLogDir:
    def test_env_tiene_prioridad(self):
        with patch.dict("os.environ", {"DPHI_LOG_DIR": "/tmp/dphi-env"}):
            assert _resolve_log_dir("otro") == Path("/tmp/dphi-env")

    def test_argumento(self):
        with patch.dict("os.environ", {"DPHI_LOG_DIR": ""}):
            assert _resolve_log_dir("corridas/logs") == Path("corridas/logs")

    def test_placeholder_sin_resolver(self):
        with patch.dict("os.environ", {"DPHI_LOG_DIR": ""}):
            assert _resolve_log_dir("${DPHI_LOG_DIR}") == Path("logs")
            assert _resolve_log_dir(None) == Path("logs")


class TestDphiLogger:
    def test_nombres_bajo_dphi(self):
        assert get_logger("dphi.operator")._log.name == "dphi.operator"
        assert get_logger("operator")._log.name == "dphi.operator"
        assert get_logger()._log.name == ROOT_LOGGER

    def test_no_propaga_a_root(self):
        assert logging.getLogger(ROOT_LOGGER).propagate is False

    def test_sin_archivo_en_pytest(self, tmp_path):
        assert configure_file_logging(tmp_path) is None
        assert not (tmp_path / "dphi.log").exists()

    def test_value_en_consola(self, capsys):
        get_logger("dphi.test").value("norma", 0.9036020036)
        assert "norma = 0.903602" in capsys.readouterr().err
