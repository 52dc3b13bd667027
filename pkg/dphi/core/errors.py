"""
errors.py — Jerarquía de excepciones de dphi.

Todas heredan de DphiError para que el CLI pueda traducirlas a
códigos de salida:
    DomainError, MapSpecError, DivergentSeriesError → exit 2
    ConvergenceError, QuadratureError               → exit 3
    ResourceLimitError                              → exit 2
"""

from __future__ import annotations

from typing import Any


class DphiError(Exception):
    """Raíz de todos los errores del paquete."""


class DomainError(DphiError, ValueError):
    """Una precondición sobre los datos de entrada no se cumple."""


class MapSpecError(DomainError):
    """Un spec de mapeo ('dilation:0.5', 'poly:0,0,1', ...) no se pudo parsear."""


class DivergentSeriesError(DomainError):
    """La serie de conteo diverge para los parámetros pedidos."""


class ResourceLimitError(DphiError):
    """Orden de truncación o tamaño de matriz por encima del límite configurado."""


class ConvergenceError(DphiError):
    """
    Un método iterativo agoto su límite de iteraciones.

    Attributes:
        last_value: Último iterado (valor escalar o arreglo).
        residual: Residuo o cambio relativo al cortar.
    """

    def __init__(self, message: str, last_value: Any = None, residual: float | None = None):
        super().__init__(message)
        self.last_value = last_value
        self.residual = residual


class QuadratureError(DphiError):
    """El integrando no es finito en algún nodo de la cuadratura."""

    def __init__(self, message: str, node: complex | None = None):
        super().__init__(message)
        self.node = node
