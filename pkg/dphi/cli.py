"""
cli.py — Punto de entrada de línea de comandos de dphi.

Este archivo maneja todos los comandos CLI usando Click. Cada
subcomando arma un RunConfig y delega en una función cmd_* que
devuelve el código de salida; ningún número se calcula solo aquí.

Códigos de salida:
    0 → ok
    2 → error de uso, de spec de mapeo o de dominio
    3 → falla numérica (no convergencia, cuadratura, chequeo fallido,
        todas las capas fallidas)

Comandos disponibles:
    python -m dphi norm --map dilation:0.5 --alpha 0.5
    python -m dphi diagnose --map lens:0.1 --alpha 0.5
    python -m dphi hs --map dilation:0.5 --alpha 0.5
    python -m dphi counting --map poly:0,0,1 --alpha 0.5 --w 0.25
    python -m dphi profile --map auto:0.3 --alpha 0.5 --format csv
    python -m dphi verify --suite cov
    python -m dphi config --show

Uso:
    # Desde código (testing):
    from click.testing import CliRunner
    from dphi.cli import main
    CliRunner().invoke(main, ["norm", "--map", "dilation:0.5"])
"""

from __future__ import annotations

import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Callable

import click
from rich.panel import Panel
from rich.table import Table

from dphi import __version__
from dphi.checks.registry import CheckRegistry
from dphi.config import AppConfig, load_config
from dphi.core.counting import counting
from dphi.core.diagnostics import default_shells, essential_norm_bracket, radial_profile
from dphi.core.errors import ConvergenceError, DomainError, DphiError, QuadratureError
from dphi.core.maps import Dilation, Polynomial, format_map_spec, parse_complex, parse_map_spec
from dphi.core.operator import (
    build_matrix,
    closed_form_dilation_norm,
    hs_integral_series,
    hs_norm_basis,
    hs_norm_integral,
    operator_norm,
)
from dphi.core.quadrature import DiskQuadrature
from dphi.core.space import SpaceParams
from dphi.publishing.formatter import ReportFormatter, write_output
from dphi.utils.logger import configure_file_logging, get_logger
from dphi.utils.logger import console as rich_console
from dphi.utils.validators import (
    VALID_FORMATS,
    VALID_SUITES,
    parse_shells,
    validate_alpha,
    validate_format,
    validate_order,
)

logger = get_logger("dphi.cli")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


# ============================================================
# RunConfig
# ============================================================

@dataclass
class RunConfig:
    """
    Parámetros de una corrida.

    Los campos en None toman el valor de config.yaml al ejecutar.
    Round-trip sin perdida: RunConfig.from_dict(cfg.to_dict()) == cfg.
    """

    command: str
    map_spec: str = ""
    alpha: float = 0.5
    order: int | None = None
    quad_radial: int | None = None
    quad_angular: int | None = None
    shells: str | None = None
    w: str | None = None
    format: str | None = None
    out: str | None = None
    suite: str = "all"
    bracket: bool = False
    config_path: str | None = None

    def __post_init__(self) -> None:
        ok, error = validate_alpha(self.alpha)
        if not ok:
            raise DomainError(error)
        self.alpha = float(self.alpha)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RunConfig:
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})


# ============================================================
# Helpers
# ============================================================

def _space(cfg: RunConfig) -> SpaceParams:
    return SpaceParams(cfg.alpha)


def _order(cfg: RunConfig, app: AppConfig, default: int) -> int:
    order = cfg.order if cfg.order is not None else default
    ok, error = validate_order(order, app.series.max_order)
    if not ok:
        raise DomainError(error)
    return order


def _quadrature(cfg: RunConfig, app: AppConfig) -> DiskQuadrature:
    return DiskQuadrature.build(
        radial=cfg.quad_radial or app.quad.radial,
        angular=cfg.quad_angular or app.quad.angular,
        cluster_exponent=app.quad.cluster_exponent,
    )


def _shells(cfg: RunConfig, app: AppConfig) -> list[float]:
    if cfg.shells is None:
        return default_shells(app.diagnostics.shell_exponents)
    shells, error = parse_shells(cfg.shells)
    if shells is None:
        raise DomainError(error)
    return shells


def _emit(
    cfg: RunConfig,
    app: AppConfig,
    record: dict[str, Any],
    rows: list[dict[str, Any]],
    title: str,
) -> None:
    fmt = cfg.format or app.output.format
    ok, error = validate_format(fmt)
    if not ok:
        raise DomainError(error)
    record = {"command": cfg.command, **record}
    text = ReportFormatter(app.output.precision).render(record, rows, fmt, title)
    write_output(text, cfg.out)


# ============================================================
# Comandos
# ============================================================

def cmd_norm(cfg: RunConfig, app: AppConfig) -> int:
    """Norma por truncación y, para dilataciones, la norma cerrada."""
    m = parse_map_spec(cfg.map_spec)
    p = _space(cfg)
    N = _order(cfg, app, app.operator.norm_order)

    mat = build_matrix(m, p, N, N, app.operator.max_matrix_entries, app.series.max_order)
    matrix_norm = operator_norm(mat, app.operator.power_tol, app.operator.power_max_iter)
    logger.value(f"‖D_φ‖ (N={N})", matrix_norm)

    record: dict[str, Any] = {
        "map": format_map_spec(m),
        "alpha": p.alpha,
        "truncation_order": N,
        "matrix_norm": matrix_norm,
        "closed_form": None,
        "x0": None,
        "eta": None,
        "gap": None,
    }
    if isinstance(m, Dilation):
        exact = closed_form_dilation_norm(m.r, p)
        record.update(
            closed_form=exact.norm,
            x0=exact.x0,
            eta=exact.eta,
            gap=abs(matrix_norm - exact.norm),
        )
    _emit(cfg, app, record, [record], "Norma de D_φ")
    return EXIT_OK


def cmd_diagnose(cfg: RunConfig, app: AppConfig) -> int:
    """Perfil radial de B con veredicto de acotamiento/compacidad."""
    m = parse_map_spec(cfg.map_spec)
    p = _space(cfg)
    report = radial_profile(
        m,
        p,
        _shells(cfg, app),
        app.diagnostics.points_per_shell,
        app.diagnostics,
        app.counting,
    )
    summary = {
        "map": report.map_spec,
        "alpha": report.alpha,
        "route": report.route,
        "sup_estimate": report.sup_estimate,
        "slope": report.slope,
        "outer_trend": report.outer_trend,
        "verdict": report.verdict,
    }
    record = report.to_record()
    if cfg.bracket:
        upper, lower = essential_norm_bracket(
            m,
            p,
            app.diagnostics,
            app.operator.test_order,
            app.counting,
            app.series.max_order,
        )
        logger.value("sqrt(B) en la capa externa", upper)
        logger.value("‖D_φ f_w‖ en el radio externo", lower)
        record.update(essential_upper=upper, essential_lower=lower)
        summary.update(essential_upper=upper, essential_lower=lower)
    _emit(cfg, app, record, [summary], "Diagnóstico")
    if report.failures == len(report.samples):
        logger.error("Fallaron todas las capas del perfil")
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_hs(cfg: RunConfig, app: AppConfig) -> int:
    """Norma de Hilbert-Schmidt: suma en la base y las dos rutas de la integral."""
    m = parse_map_spec(cfg.map_spec)
    p = _space(cfg)
    N = _order(cfg, app, app.operator.hs_terms)

    basis = hs_norm_basis(m, p, N, max_order=app.series.max_order)
    integral = hs_norm_integral(m, p, _quadrature(cfg, app))
    series = None
    if isinstance(m, (Dilation, Polynomial)) and m.sup_norm_bound < 1.0:
        series = hs_integral_series(m, p, app.operator.hs_terms)

    record = {
        "map": format_map_spec(m),
        "alpha": p.alpha,
        "basis_terms": N,
        "hs_basis": basis.value,
        "hs_basis_last_term": basis.last_term,
        "hs_integral_quadrature": integral,
        "hs_integral_series": series,
        "equivalence_ratio": basis.value / integral,
    }
    _emit(cfg, app, record, [record], "Hilbert-Schmidt")
    return EXIT_OK


def cmd_counting(cfg: RunConfig, app: AppConfig) -> int:
    """Una evaluación de N_φ,α(w)."""
    if cfg.w is None:
        raise DomainError("counting requiere --w")
    m = parse_map_spec(cfg.map_spec)
    sample = counting(m, _space(cfg), parse_complex(cfg.w), app.counting)
    record = {"map": format_map_spec(m), "alpha": cfg.alpha, **sample.to_record()}
    row = {k: v for k, v in record.items() if k != "preimages"}
    _emit(cfg, app, record, [row], "Función de conteo")
    return EXIT_OK


def cmd_profile(cfg: RunConfig, app: AppConfig) -> int:
    """Perfil por capa (pensado para CSV)."""
    m = parse_map_spec(cfg.map_spec)
    report = radial_profile(
        m,
        _space(cfg),
        _shells(cfg, app),
        app.diagnostics.points_per_shell,
        app.diagnostics,
        app.counting,
    )
    _emit(cfg, app, report.to_record(), report.to_rows(), "Perfil radial de B")
    if report.failures == len(report.samples):
        logger.error("Fallaron todas las capas del perfil")
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_verify(cfg: RunConfig, app: AppConfig) -> int:
    """Corre una suite de chequeos; 3 si alguno falla."""
    if cfg.suite not in VALID_SUITES:
        raise DomainError(f"Suite '{cfg.suite}' inválida. Opciones: {', '.join(VALID_SUITES)}")
    registry = CheckRegistry.with_defaults(app)
    results = registry.run_suite(cfg.suite)

    rows = []
    checks = []
    for name, result in results:
        suite = registry.get(name).suite
        rows.append({
            "check": name,
            "suite": suite,
            "success": result.success,
            "summary": result.output if result.success else result.error,
        })
        checks.append({"name": name, "suite": suite, **asdict(result)})
    _emit(cfg, app, {"suite": cfg.suite, "checks": checks}, rows, f"Verificación ({cfg.suite})")

    failed = [row["check"] for row in rows if not row["success"]]
    if failed:
        logger.error(f"Chequeos fallidos: {', '.join(failed)}")
        return EXIT_NUMERIC
    logger.success(f"{len(rows)} chequeos OK")
    return EXIT_OK


COMMANDS: dict[str, Callable[[RunConfig, AppConfig], int]] = {
    "norm": cmd_norm,
    "diagnose": cmd_diagnose,
    "hs": cmd_hs,
    "counting": cmd_counting,
    "profile": cmd_profile,
    "verify": cmd_verify,
}


def run(cfg: RunConfig, app: AppConfig | None = None) -> int:
    """
    Ejecuta cfg.command y traduce excepciones a códigos de salida.

    Returns:
        0, 2 o 3 (ver docstring del módulo).
    """
    if app is None:
        app = load_config(Path(cfg.config_path) if cfg.config_path else None)
    configure_file_logging(app.output.log_dir)
    logger.debug(f"Corrida: {cfg.to_dict()}")
    try:
        return COMMANDS[cfg.command](cfg, app)
    except (ConvergenceError, QuadratureError) as e:
        logger.error(f"Falla numérica: {e}")
        return EXIT_NUMERIC
    except DphiError as e:
        logger.error(str(e))
        return EXIT_USAGE


# ============================================================
# Click
# ============================================================

def _alpha_callback(ctx: click.Context, param: click.Parameter, value: float) -> float:
    ok, error = validate_alpha(value)
    if not ok:
        raise click.BadParameter(error)
    return value


def _map_options(f: Callable) -> Callable:
    """Opciones comunes a los comandos que trabajan sobre un mapeo."""
    options = [
        click.option("--map", "map_spec", required=True,
                     help="Mapeo: dilation:r | auto:beta[,eta] | lens:delta | exp | poly:c0,c1,..."),
        click.option("--alpha", "-a", type=float, default=0.5, show_default=True,
                     callback=_alpha_callback, help="Parámetro del espacio, en (0, 1)"),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _output_options(f: Callable) -> Callable:
    options = [
        click.option("--format", "fmt", type=click.Choice(VALID_FORMATS), default=None,
                     help="Formato de salida (default: output.format de config.yaml)"),
        click.option("--out", default=None, help="Archivo de salida (default: stdout)"),
        click.option("--config", "config_path", default=None, help="Ruta alternativa a config.yaml"),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _invoke(command: str, **kwargs: Any) -> None:
    kwargs["format"] = kwargs.pop("fmt", None)
    try:
        cfg = RunConfig(command=command, **kwargs)
    except DomainError as e:
        logger.error(str(e))
        sys.exit(EXIT_USAGE)
    sys.exit(run(cfg))


@click.group()
@click.version_option(version=__version__, prog_name="dphi")
def main():
    """Operadores de composición-diferenciación D_φ sobre D_α."""
    pass


@main.command()
@_map_options
@click.option("--order", "-n", type=int, default=None, help="Truncación N de la matriz")
@_output_options
def norm(**kwargs: Any):
    """Norma de D_φ (cerrada para dilataciones)."""
    _invoke("norm", **kwargs)


@main.command()
@_map_options
@click.option("--shells", default=None, help="Entero k (capas 1-2^-j) o radios separados por coma")
@click.option("--bracket", is_flag=True, default=False,
              help="Agrega las dos evidencias de norma esencial (Dilation, Lens o ‖φ‖_∞ < 1)")
@_output_options
def diagnose(**kwargs: Any):
    """Veredicto de acotamiento y compacidad por perfil radial."""
    _invoke("diagnose", **kwargs)


@main.command()
@_map_options
@click.option("--order", "-n", type=int, default=None, help="Términos de la suma en la base")
@click.option("--quad-radial", type=int, default=None, help="Nodos radiales de la cuadratura")
@click.option("--quad-angular", type=int, default=None, help="Nodos angulares de la cuadratura")
@_output_options
def hs(**kwargs: Any):
    """Norma de Hilbert-Schmidt por tres rutas."""
    _invoke("hs", **kwargs)


@main.command(name="counting")
@_map_options
@click.option("--w", "w", required=True, help="Punto del disco, ej: 0.25 o 0.1+0.2i")
@_output_options
def counting_cmd(**kwargs: Any):
    """Función de conteo generalizada N_φ,α(w)."""
    _invoke("counting", **kwargs)


@main.command()
@_map_options
@click.option("--shells", default=None, help="Entero k (capas 1-2^-j) o radios separados por coma")
@_output_options
def profile(**kwargs: Any):
    """Máximo de B por capa."""
    _invoke("profile", **kwargs)


@main.command()
@click.option("--suite", type=click.Choice(VALID_SUITES), default="all", show_default=True)
@_output_options
def verify(**kwargs: Any):
    """Chequeos numéricos de identidades y cotas."""
    _invoke("verify", **kwargs)


@main.command()
@click.option("--show", is_flag=True, help="Muestra la configuración efectiva")
@click.option("--config", "config_path", default=None, help="Ruta alternativa a config.yaml")
def config(show: bool, config_path: str | None):
    """Gestiona la configuración de dphi."""
    cfg = load_config(Path(config_path) if config_path else None)

    if show:
        tabla = Table(title="Configuración de dphi")
        tabla.add_column("Parámetro", style="cyan")
        tabla.add_column("Valor", style="green")
        for section, values in cfg.to_dict().items():
            for key, value in values.items():
                tabla.add_row(f"{section}.{key}", str(value))
        rich_console.print(tabla)
    else:
        rich_console.print(Panel("Usa [bold]dphi config --show[/bold]", title="dphi"))
