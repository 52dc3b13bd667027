"""
config.py — Carga y gestiona la configuración de dphi.

Se encarga de:
1. Cargar config.yaml (resoluciones de cuadratura, órdenes de truncación,
   tolerancias, reglas de diagnóstico)
2. Cargar .env (overrides locales: DPHI_LOG_DIR, DPHI_CONFIG)
3. Resolver variables de entorno ${VAR} en los valores del YAML
4. Convertir cada sección a su dataclass

Uso:
    from dphi.config import load_config
    config = load_config()
    print(config.quad.radial)  # 256
"""

from __future__ import annotations

import os
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import yaml
from dotenv import load_dotenv


# ============================================================
# Dataclasses de configuración
# ============================================================
# Una dataclass por sección de config.yaml.
# ============================================================

@dataclass
class SeriesConfig:
    """Límites de la aritmética de series truncadas."""
    max_order: int = 65536


@dataclass
class QuadConfig:
    """Resolución de la cuadratura tensorial en el disco."""
    radial: int = 256
    angular: int = 512
    cluster_exponent: float = 2.0


@dataclass
class OperatorConfig:
    """Truncaciones y tolerancias del operador D_φ."""
    norm_order: int = 200
    hs_terms: int = 2000
    power_tol: float = 1e-12
    power_max_iter: int = 200_000
    max_matrix_entries: int = 4_000_000
    test_order: int = 256


@dataclass
class CountingConfig:
    """Parámetros de la función de conteo de Nevanlinna."""
    root_method: str = "companion"
    boundary_tol: float = 1e-10
    exp_rel_tol: float = 1e-10
    aberth_max_iter: int = 500


@dataclass
class DiagnosticsConfig:
    """Malla radial y regla de tendencia."""
    shell_exponents: int = 14
    points_per_shell: int = 256
    trend_window: int = 6
    slope_tol: float = 0.05
    test_radii_exponents: int = 10


@dataclass
class OutputConfig:
    """Formato de salida del CLI."""
    format: str = "human"
    precision: int = 4
    log_dir: str = "logs"


@dataclass
class AppConfig:
    """Configuración completa de la aplicación."""
    series: SeriesConfig = field(default_factory=SeriesConfig)
    quad: QuadConfig = field(default_factory=QuadConfig)
    operator: OperatorConfig = field(default_factory=OperatorConfig)
    counting: CountingConfig = field(default_factory=CountingConfig)
    diagnostics: DiagnosticsConfig = field(default_factory=DiagnosticsConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def to_dict(self) -> dict[str, Any]:
        """Dict anidado (para `config --show` y para el JSON de salida)."""
        return asdict(self)


# ============================================================
# Funciones de carga
# ============================================================

def _resolve_env_vars(value: str) -> str:
    """
    Resuelve variables de entorno en un string.

    Ejemplo:
        "${DPHI_LOG_DIR}" → "/var/log/dphi"
    Si la variable no existe se deja el placeholder tal cual.
    """
    patron = re.compile(r"\$\{(\w+)\}")

    def reemplazar(match: re.Match) -> str:
        return os.environ.get(match.group(1), match.group(0))

    return patron.sub(reemplazar, value)


def _resolve_env_recursive(data: Any) -> Any:
    """Resuelve ${VARIABLE} recursivamente en dicts y listas del YAML."""
    if isinstance(data, str):
        return _resolve_env_vars(data)
    elif isinstance(data, dict):
        return {k: _resolve_env_recursive(v) for k, v in data.items()}
    elif isinstance(data, list):
        return [_resolve_env_recursive(item) for item in data]
    return data


def _coerce(value: Any, default: Any) -> Any:
    """
    Convierte strings del YAML (p.ej. resueltos desde ${VAR}) al tipo
    del valor por defecto. YAML ya entrega int/float nativos en el
    caso normal; esto cubre "1e-12" escrito entre comillas.
    """
    if isinstance(default, bool) or not isinstance(value, str):
        return value
    if isinstance(default, int):
        return int(float(value))
    if isinstance(default, float):
        return float(value)
    return value


def _dict_to_dataclass(data: dict, cls: type) -> Any:
    """
    Convierte un diccionario a una dataclass, ignorando keys desconocidas.

    Un YAML con una key nueva que el código aun no conoce no debe
    tumbar una corrida batch.
    """
    defaults = cls()
    campos_validos = {f.name for f in cls.__dataclass_fields__.values()}
    datos_filtrados = {
        k: _coerce(v, getattr(defaults, k))
        for k, v in (data or {}).items()
        if k in campos_validos
    }
    return cls(**datos_filtrados)


def _find_config_dir() -> Path:
    """
    Encuentra el directorio raíz del proyecto (donde está config.yaml).

    Busca hacia arriba desde el directorio actual; si no lo encuentra
    usa el directorio actual.
    """
    current = Path.cwd()
    for parent in [current] + list(current.parents):
        if (parent / "config.yaml").exists():
            return parent
    return current


def load_config(config_path: Path | None = None) -> AppConfig:
    """
    Carga la configuración completa de dphi.

    Pasos:
    1. Carga .env para tener las variables de entorno disponibles
    2. Lee config.yaml (o DPHI_CONFIG, o la ruta dada)
    3. Resuelve ${VARIABLES} en los valores del YAML
    4. Convierte cada sección a su dataclass

    Args:
        config_path: Ruta al config.yaml. Si es None, busca automaticamente.

    Returns:
        AppConfig lista para usar (valores por defecto si no hay archivo).
    """
    proyecto_dir = _find_config_dir()
    env_path = proyecto_dir / ".env"
    if env_path.exists():
        load_dotenv(env_path)

    if config_path is None:
        override = os.environ.get("DPHI_CONFIG")
        config_path = Path(override) if override else proyecto_dir / "config.yaml"

    if not config_path.exists():
        return AppConfig()

    with open(config_path, "r", encoding="utf-8") as f:
        raw_config = yaml.safe_load(f) or {}

    config_resuelto = _resolve_env_recursive(raw_config)

    return AppConfig(
        series=_dict_to_dataclass(config_resuelto.get("series", {}), SeriesConfig),
        quad=_dict_to_dataclass(config_resuelto.get("quad", {}), QuadConfig),
        operator=_dict_to_dataclass(config_resuelto.get("operator", {}), OperatorConfig),
        counting=_dict_to_dataclass(config_resuelto.get("counting", {}), CountingConfig),
        diagnostics=_dict_to_dataclass(
            config_resuelto.get("diagnostics", {}), DiagnosticsConfig
        ),
        output=_dict_to_dataclass(config_resuelto.get("output", {}), OutputConfig),
    )
