"""
base.py — Interfaz base para los chequeos de verificación de dphi.

Cada chequeo hereda de BaseCheck y se registra en el CheckRegistry.
`python -m dphi verify --suite cov` corre todos los de una suite.

Uso:
    from dphi.checks.base import BaseCheck, CheckResult

    class MyCheck(BaseCheck):
        name = "my_check"
        description = "Verifica algo"
        suite = "structure"
        ...
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckResult:
    """
    Resultado de un chequeo.

    Campos:
        success: Si el chequeo paso.
        output: Resumen legible (una línea).
        error: Mensaje de error si falló.
        details: Números crudos (peor residuo, tolerancia, casos).
    """

    success: bool
    output: str = ""
    error: str = ""
    details: dict[str, Any] = field(default_factory=dict)


class BaseCheck(ABC):
    """
    Interfaz base de un chequeo.

    Cada chequeo define:
    - name: Nombre único
    - description: Que identidad o cota verifica
    - suite: cov | kernel | structure
    - execute(): Lógica; nunca imprime, solo devuelve CheckResult
    """

    @property
    @abstractmethod
    def name(self) -> str:
        ...

    @property
    @abstractmethod
    def description(self) -> str:
        ...

    @property
    @abstractmethod
    def suite(self) -> str:
        ...

    def execute(self, **params: Any) -> CheckResult:
        """Corre el chequeo. Las subclases definen sus parámetros con nombre."""
        raise NotImplementedError(f"{self.__class__.__name__}.execute() no implementado")

    def to_record(self) -> dict[str, str]:
        return {"name": self.name, "description": self.description, "suite": self.suite}
