"""
formatter.py — Traduce los resultados de dphi a JSON, CSV o tabla rich.

Cada comando produce:
- record: un dict con el resultado completo (va a JSON)
- rows: una lista de dicts planos (va a CSV y a la tabla humana)

Contrato de JSON:
    json.dumps(sort_keys=True, indent=2) con "schema": 1, doble
    precisión completa y complejos como {"re": x, "im": y}. Mismas
    entradas producen bytes identicos. NaN e inf se escriben como null.

Uso:
    from dphi.publishing.formatter import ReportFormatter, write_output
    formatter = ReportFormatter(precision=4)
    text = formatter.render(record, rows, "json")
    write_output(text, None)   # stdout
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any

import numpy as np
from rich.console import Console
from rich.table import Table

from dphi.core.errors import DomainError
from dphi.core.maps import format_complex
from dphi.utils.logger import get_logger

logger = get_logger("dphi.publishing")

SCHEMA_VERSION = 1


def _jsonable(value: Any) -> Any:
    """Convierte recursivamente a tipos que json acepta."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, complex):
        return {"re": _jsonable(value.real), "im": _jsonable(value.imag)}
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _cell(value: Any, precision: int | None) -> str:
    """Texto de una celda: precisión fija (tabla) o repr completo (CSV)."""
    if isinstance(value, np.generic):
        value = value.item()
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, complex):
        if precision is None:
            return format_complex(value)
        return f"{value.real:.{precision}f}{value.imag:+.{precision}f}i"
    if isinstance(value, float):
        if precision is None:
            return repr(value)
        return f"{value:.{precision}f}" if math.isfinite(value) else str(value)
    return str(value)


class ReportFormatter:
    """
    Formatea records y filas en los tres formatos de salida.

    Args:
        precision: Decimales de la tabla humana (JSON y CSV no redondean).
    """

    FORMATS = ("human", "json", "csv")

    def __init__(self, precision: int = 4) -> None:
        self._precision = precision

    def to_json(self, record: dict[str, Any]) -> str:
        payload = _jsonable(record)
        payload["schema"] = SCHEMA_VERSION
        return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"

    def to_csv(self, rows: list[dict[str, Any]]) -> str:
        if not rows:
            return ""
        fields = list(rows[0].keys())
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _cell(row.get(k), None) for k in fields})
        return buffer.getvalue()

    def to_human(self, rows: list[dict[str, Any]], title: str = "") -> str:
        table = Table(title=title or None, show_header=True, header_style="bold cyan")
        fields = list(rows[0].keys()) if rows else []
        for name in fields:
            table.add_column(name)
        for row in rows:
            table.add_row(*[_cell(row.get(k), self._precision) for k in fields])

        buffer = io.StringIO()
        console = Console(file=buffer, width=120, color_system=None, force_terminal=False)
        console.print(table)
        return buffer.getvalue()

    def render(
        self,
        record: dict[str, Any],
        rows: list[dict[str, Any]],
        fmt: str,
        title: str = "",
    ) -> str:
        """Despacha al formato pedido."""
        if fmt == "json":
            return self.to_json(record)
        if fmt == "csv":
            return self.to_csv(rows)
        if fmt == "human":
            return self.to_human(rows, title)
        raise DomainError(f"Formato '{fmt}' inválido. Opciones: {', '.join(self.FORMATS)}")


def write_output(text: str, out_path: Path | str | None) -> None:
    """Escribe en out_path (creando directorios) o en stdout."""
    if out_path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(out_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Salida escrita en {path}")
