"""
validators.py -- Validación de parámetros de corrida del CLI.

Cada función retorna una tupla (es_valido, mensaje_de_error).
Si es_valido es True, el mensaje será una cadena vacía.

Uso:
    from dphi.utils.validators import validate_alpha, parse_shells

    válido, error = validate_alpha(0.5)
    if not válido:
        print(error)
"""

from __future__ import annotations

import math
from typing import Any


# =====================================================================
# Constantes de validación
# =====================================================================

VALID_FORMATS: list[str] = ["human", "json", "csv"]

VALID_SUITES: list[str] = ["cov", "kernel", "structure", "all"]

# La capa externa debe acercarse al circulo al menos esto
MIN_OUTER_SHELL: float = 1.0 - 1e-4


def validate_alpha(value: Any) -> tuple[bool, str]:
    """
    Valida que alpha sea un real en el intervalo abierto (0, 1).

    Ejemplo:
        validate_alpha(0.5)   # (True, "")
        validate_alpha(1.0)   # (False, "alpha debe estar en (0, 1)...")
    """
    try:
        alpha = float(value)
    except (TypeError, ValueError):
        return False, f"alpha debe ser un número, recibido '{value}'"
    if not math.isfinite(alpha) or not 0.0 < alpha < 1.0:
        return False, f"alpha debe estar en el intervalo abierto (0, 1), recibido {value}"
    return True, ""


def validate_shells(shells: list[float]) -> tuple[bool, str]:
    """Capas estrictamente crecientes en (0,1) con la última >= 1 - 1e-4."""
    if not shells:
        return False, "Se necesita al menos una capa"
    for r in shells:
        if not 0.0 < r < 1.0:
            return False, f"Cada capa debe estar en (0, 1), recibido {r}"
    for prev, cur in zip(shells, shells[1:]):
        if cur <= prev:
            return False, f"Las capas deben ser estrictamente crecientes ({prev} >= {cur})"
    if shells[-1] < MIN_OUTER_SHELL:
        return False, f"La capa final debe ser >= {MIN_OUTER_SHELL}, recibido {shells[-1]}"
    return True, ""


def validate_order(order: Any, cap: int) -> tuple[bool, str]:
    """Orden de truncación entero en [1, cap]."""
    if isinstance(order, bool) or not isinstance(order, int):
        return False, f"El orden debe ser entero, recibido '{order}'"
    if order < 1:
        return False, f"El orden debe ser >= 1, recibido {order}"
    if order > cap:
        return False, f"El orden {order} excede el límite configurado {cap}"
    return True, ""


def validate_format(fmt: str) -> tuple[bool, str]:
    """Formato de salida soportado."""
    if fmt not in VALID_FORMATS:
        return False, f"Formato '{fmt}' inválido. Opciones: {', '.join(VALID_FORMATS)}"
    return True, ""


def parse_shells(text: str) -> tuple[list[float] | None, str]:
    """
    Interpreta --shells: un entero k (capas 1 - 2^-j, j = 1..k) o una
    lista de radios separados por coma.

    Returns:
        (capas, mensaje_de_error); capas es None si hubo error.
    """
    raw = text.strip()
    if raw.isdigit():
        k = int(raw)
        if k < 14:
            return None, f"Con un entero se necesitan al menos 14 capas (1 - 2^-14 >= 1 - 1e-4), recibido {k}"
        shells = [1.0 - 2.0 ** (-j) for j in range(1, k + 1)]
    else:
        try:
            shells = [float(part) for part in raw.split(",") if part.strip()]
        except ValueError:
            return None, f"Capas inválidas: '{text}'"
    ok, error = validate_shells(shells)
    return (shells, "") if ok else (None, error)
