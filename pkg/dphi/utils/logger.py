"""
logger.py — Logging para dphi usando Rich + archivo.

Dual output:
- Rich console (stderr): avisos de la corrida; stdout queda libre para
  el JSON/CSV de los comandos
- Archivo rotativo <log_dir>/dphi.log con el detalle (incluye debug:
  tamaños de matriz, iteraciones, capas fallidas)

El archivo se activa con configure_file_logging(); el CLI lo llama con
output.log_dir de config.yaml. DPHI_LOG_DIR tiene prioridad.

Uso:
    from dphi.utils.logger import get_logger, console
    logger = get_logger("dphi.operator")
    logger.info("Construyendo matriz 201x201...")
    logger.success("Power iteration convergió en 812 iteraciones")
    logger.value("‖D_φ‖", 0.903602)
"""

from __future__ import annotations

import io
import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path

from rich.console import Console
from rich.theme import Theme

_in_pytest = "pytest" in sys.modules or "PYTEST_CURRENT_TEST" in os.environ

# cp1252 en Windows no tiene φ, α ni ‖
if sys.platform == "win32" and not _in_pytest:
    for _name in ("stdout", "stderr"):
        _stream = getattr(sys, _name)
        if hasattr(_stream, "buffer"):
            setattr(sys, _name, io.TextIOWrapper(_stream.buffer, encoding="utf-8", errors="replace"))

dphi_theme = Theme({
    "info": "cyan",
    "success": "bold green",
    "warning": "bold yellow",
    "error": "bold red",
    "step": "bold magenta",
    "value": "bold blue",
})

console = Console(theme=dphi_theme, stderr=True)

ROOT_LOGGER = "dphi"
LOG_FILENAME = "dphi.log"
DEFAULT_LOG_DIR = "logs"

_root = logging.getLogger(ROOT_LOGGER)
_root.setLevel(logging.DEBUG)
_root.propagate = False
_root.addHandler(logging.NullHandler())


# ================================================================
# Archivo
# ================================================================

def _resolve_log_dir(log_dir: str | Path | None) -> Path:
    """DPHI_LOG_DIR > argumento > "logs". Un ${VAR} sin resolver cuenta como vacío."""
    env = os.environ.get("DPHI_LOG_DIR")
    if env:
        return Path(env)
    text = str(log_dir) if log_dir else ""
    if not text or text.startswith("${"):
        return Path(DEFAULT_LOG_DIR)
    return Path(text)


def configure_file_logging(log_dir: str | Path | None = None) -> Path | None:
    """
    Agrega el handler rotativo (5 MB x 5) al logger raíz "dphi".

    Idempotente: una segunda llamada no duplica handlers. Bajo pytest
    no escribe nada.

    Returns:
        Ruta del archivo de log, o None si no se activo.
    """
    if _in_pytest:
        return None

    path = _resolve_log_dir(log_dir) / LOG_FILENAME
    for handler in _root.handlers:
        if isinstance(handler, RotatingFileHandler):
            return Path(handler.baseFilename)

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError:
        # Directorio de solo lectura: solo consola
        return None

    handler = RotatingFileHandler(path, maxBytes=5 * 1024 * 1024, backupCount=5, encoding="utf-8")
    handler.setFormatter(logging.Formatter(
        "%(asctime)s %(levelname)-7s %(name)s | %(message)s",
        datefmt="%Y-%m-%dT%H:%M:%S",
    ))
    _root.addHandler(handler)
    return path


# ================================================================
# Logger
# ================================================================

class DphiLogger:
    """
    Consola rich + logger estándar hijo de "dphi".

    Args:
        name: Nombre del módulo (ej: "dphi.counting")
    """

    def __init__(self, name: str):
        self._name = name
        qualified = name if name == ROOT_LOGGER or name.startswith(ROOT_LOGGER + ".") else f"{ROOT_LOGGER}.{name}"
        self._log = logging.getLogger(qualified)

    @property
    def name(self) -> str:
        return self._name

    def debug(self, message: str) -> None:
        """Solo archivo."""
        self._log.debug(message)

    def info(self, message: str) -> None:
        console.print(f"[info]i  {message}[/info]")
        self._log.info(message)

    def success(self, message: str) -> None:
        console.print(f"[success][OK] {message}[/success]")
        self._log.info(f"OK: {message}")

    def warning(self, message: str) -> None:
        console.print(f"[warning][!] {message}[/warning]")
        self._log.warning(message)

    def error(self, message: str) -> None:
        console.print(f"[error][X] {message}[/error]")
        self._log.error(message)

    def step(self, number: int, total: int, message: str) -> None:
        """Paso de un proceso largo, ej. un chequeo de una suite."""
        console.print(f"[step]  [{number}/{total}] {message}[/step]")
        self._log.info(f"[{number}/{total}] {message}")

    def value(self, label: str, value: float) -> None:
        """Un número con precisión completa en el archivo y 6 cifras en consola."""
        console.print(f"   {label} = [value]{value:.6g}[/value]")
        self._log.info(f"{label} = {value!r}")


def get_logger(name: str = ROOT_LOGGER) -> DphiLogger:
    """
    Obtiene un logger para el módulo especificado.

    Ejemplo:
        logger = get_logger("dphi.space")
        logger.info("Cuadratura 256x512 lista")
    """
    return DphiLogger(name)
