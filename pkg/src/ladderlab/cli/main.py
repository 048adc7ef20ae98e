"""
Command Line Interface for LadderLab.
"""
import functools
import sys
from fractions import Fraction
from typing import Optional

import click

from .. import __version__
from ..config.manager import ConfigManager, parse_scalar
from ..exceptions import (
    ConfigurationError,
    GridError,
    HierarchyError,
    LadderError,
    LadderLabError,
    OperatorError,
    OracleError,
    VerificationError,
)
from ..hierarchies import HierarchyFactory
from ..models.labels import as_fraction, format_rational
from ..service import LadderLabService
from ..utils.logger import get_logger, setup_logging

logger = get_logger(__name__)

EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

USAGE_ERRORS = (ConfigurationError, GridError, HierarchyError)
NUMERICAL_ERRORS = (OracleError, LadderError, OperatorError, VerificationError)


class RationalType(click.ParamType):
    """Integers, decimals or fractions such as ``1/2``."""

    name = "rational"

    def convert(self, value, param, ctx) -> Fraction:
        if isinstance(value, Fraction):
            return value
        try:
            return as_fraction(str(value).strip())
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a rational number", param, ctx)


RATIONAL = RationalType()


def exit_code(error: LadderLabError) -> int:
    """Exit code for a domain error: 2 for usage errors, 3 for numerical ones."""
    if isinstance(error, NUMERICAL_ERRORS):
        return EXIT_NUMERICAL
    return EXIT_USAGE


def handle_errors(command):
    """Report domain errors on stderr and exit with the matching code."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return command(*args, **kwargs)
        except LadderLabError as e:
            click.echo(f"Error: {e}", err=True)
            logger.debug(f"{command.__name__} failed", exc_info=True)
            ctx.exit(exit_code(e))

    return wrapper


def grid_options(command):
    """Model and grid flags shared by the spectrum and state commands."""
    options = [
        click.option("--model", "-m", required=True, help="Hierarchy model name"),
        click.option("--alpha", type=float, help="Morse range parameter"),
        click.option("--x-min", type=float, help="Grid lower end"),
        click.option("--x-max", type=float, help="Grid upper end"),
        click.option("--count", type=int, help="Number of grid points"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def resolve(ctx, model: str, alpha: Optional[float], x_min, x_max, count):
    service: LadderLabService = ctx.obj["service"]
    if alpha is not None:
        ctx.obj["config"].set("models.morse.alpha", alpha)
    hierarchy = service.model(model)
    grid = service.grid(hierarchy, x_min=x_min, x_max=x_max, count=count)
    return service, hierarchy, grid


@click.group()
@click.version_option(version=__version__)
@click.option("--config", "-c", default="config/config.yaml", help="Path to config file (YAML or key=value)")
@click.option("--debug", is_flag=True, help="Enable debug logging")
@click.option("--log-file", type=click.Path(dir_okay=False), help="Also log to this file")
@click.pass_context
def cli(ctx, config: str, debug: bool, log_file: Optional[str]):
    """
    LadderLab - refined factorizations of the radial oscillator, Morse and
    radial Coulomb hierarchies, checked against a finite-difference oracle.
    """
    try:
        config_manager = ConfigManager(config)
    except ConfigurationError as e:
        click.echo(f"Error loading config: {e}", err=True)
        ctx.exit(EXIT_USAGE)

    setup_logging("DEBUG" if debug else config_manager.get("app.log_level", "WARNING"), log_file)

    try:
        service = LadderLabService(config_manager)
    except ConfigurationError as e:
        click.echo(f"Error: {e}", err=True)
        ctx.exit(EXIT_USAGE)

    ctx.ensure_object(dict)
    ctx.obj["service"] = service
    ctx.obj["config"] = config_manager


@cli.command()
@grid_options
@click.option("--l", "ell", type=RATIONAL, required=True, help="Hierarchy label l")
@click.option("--k", "k", type=click.IntRange(1, 12), default=3, show_default=True,
              help="Number of levels")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), help="Also write the table as CSV")
@click.pass_context
@handle_errors
def spectrum(ctx, model, alpha, x_min, x_max, count, ell, k, csv_path):
    """
    Lowest oracle eigenvalues of H^l next to the closed-form energies.

    Examples:

        \b
        ladderlab spectrum --model coulomb --l 0 --k 2
        ladderlab spectrum --model morse --alpha 1 --l 5 --k 3 --csv morse.csv
    """
    service, hierarchy, grid = resolve(ctx, model, alpha, x_min, x_max, count)
    rows = service.spectrum(hierarchy, ell, k, grid)
    service.display.print_spectrum(hierarchy.name, format_rational(ell), rows)
    if csv_path:
        service.exporter.export_spectrum(rows, csv_path)


@cli.command()
@grid_options
@click.option("--n", "n", type=RATIONAL, required=True, help="Energy label n")
@click.option("--l", "ell", type=RATIONAL, required=True, help="Hierarchy label l")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="CSV path")
@click.option("--sparkline", is_flag=True, help="Print an ASCII sparkline of |psi|")
@click.pass_context
@handle_errors
def state(ctx, model, alpha, x_min, x_max, count, n, ell, output, sparkline):
    """
    Build ψ_n^l with ladder operators and write it as x,psi CSV.

    Examples:

        \b
        ladderlab state --model oscillator --n 2 --l 0 -o s.csv
        ladderlab state --model coulomb --n 0 --l 0 --sparkline
    """
    service, hierarchy, grid = resolve(ctx, model, alpha, x_min, x_max, count)
    wavefunction, residual = service.state(hierarchy, n, ell, grid)
    path = output or f"{hierarchy.name}_n{n}_l{ell}.csv".replace("/", "-")
    service.exporter.export_state(wavefunction, path)
    service.display.print_state(
        str(wavefunction.labels), grid.count, residual,
        wavefunction.values if sparkline else None,
    )
    service.display.print_success(f"Written to {path}")


def parse_thresholds(values) -> dict:
    overrides = {}
    for item in values:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise click.BadParameter(f"expected NAME=VALUE, got {item!r}", param_hint="--threshold")
        overrides[key.strip()] = parse_scalar(value.strip())
    return overrides


@cli.command()
@click.option("--all", "all_models", is_flag=True, help="Verify every registered model")
@click.option("--model", "-m", "models", multiple=True, help="Model to verify (repeatable)")
@click.option("--check", "checks", multiple=True, help="Check family to run (repeatable)")
@click.option("--threshold", "thresholds", multiple=True, help="Override a gate, NAME=VALUE")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="JSON report path")
@click.option("--verbose", "-v", is_flag=True, help="List passing checks too")
@click.option("--no-progress", is_flag=True, help="Hide the progress bar")
@click.pass_context
@handle_errors
def verify(ctx, all_models, models, checks, thresholds, output, verbose, no_progress):
    """
    Run the verification suite and write a JSON report.

    Exits with 0 only if every check passed.

    Examples:

        \b
        ladderlab verify --all
        ladderlab verify --model morse --check commutators
        ladderlab verify --threshold refined_identity=1e-9
    """
    service: LadderLabService = ctx.obj["service"]
    overrides = parse_thresholds(thresholds)

    selected = None
    if all_models:
        selected = HierarchyFactory.list_models()
    elif models:
        selected = list(models)

    report = service.verify(
        models=selected,
        checks=list(checks) or None,
        thresholds=overrides,
        progress=False if no_progress else None,
    )
    path = service.export_report(report, output)
    service.display.print_report(report, verbose)
    click.echo(f"Report: {path}")
    if not report.all_passed:
        ctx.exit(EXIT_FAILED)


@cli.command()
@click.option("--model", "-m", required=True, help="Hierarchy model name")
@click.option("--n-max", type=click.IntRange(0, 12), default=2, show_default=True,
              help="Largest n shown")
@click.pass_context
@handle_errors
def lattice(ctx, model, n_max):
    """
    Draw the (n, l) lattice with its ladder arrows.

    Examples:

        \b
        ladderlab lattice --model coulomb --n-max 1
    """
    service: LadderLabService = ctx.obj["service"]
    diagram = service.lattice(service.model(model), n_max)
    service.display.print_text(diagram.render())


@cli.command()
def models():
    """List all available hierarchy models."""
    names = HierarchyFactory.list_models()

    click.echo("Available models:")
    for name in names:
        click.echo(f"  • {name}")

    click.echo(f"\nTotal: {len(names)} model(s)")


@cli.command()
@click.pass_context
def config_info(ctx):
    """Show current configuration."""
    config: ConfigManager = ctx.obj["config"]

    click.echo("Current Configuration:")
    click.echo(f"  Enabled models: {', '.join(config.get('models.enabled', []))}")
    click.echo(f"  Morse alpha: {config.get('models.morse.alpha')}")
    for name in config.get("grids", {}):
        spec = config.get(f"grids.{name}")
        click.echo(f"  Grid {name}: [{spec['x_min']}, {spec['x_max']}], {spec['count']} points")
    click.echo(f"  Max workers: {config.get('performance.max_workers')}")
    click.echo(f"  Report path: {config.get('report.path')}")
    click.echo(f"  Deterministic report: {config.get('report.deterministic')}")


def main():
    """Main entry point."""
    cli(obj={})


if __name__ == "__main__":
    sys.exit(main())
