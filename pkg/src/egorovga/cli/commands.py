import logging
import math
import sys
from pathlib import Path

import click

from src.egorovga.core.config import ENV_PREFIX, ConfigFactory, Mode
from src.egorovga.core.exceptions import ConfigurationError, EgorovError, KernelError, ReportingError, ScenarioError
from src.egorovga.utils.logger import LoggerFactory

EXIT_SUCCESS = 0
EXIT_CHECK_FAILURE = 1
EXIT_CONFIG_ERROR = 2

VERIFY_CHOICES = [
    "embedding",
    "polynomials",
    "derivatives",
    "support",
    "association",
    "pushforward",
    "regular",
    "scalars",
    "cutoff",
    "powers",
]


@click.group("kernel")
def kernel():
    """Build and inspect delta kernels."""


@kernel.command("build")
@click.option("--m", "m", type=int, default=2, show_default=True, help="Number of vanishing even moments")
@click.option("--quad-resolution", type=int, default=128, show_default=True, help="Nodes of the moment rule")
@click.option("--out", "out", type=click.Path(dir_okay=False), required=True, help="Kernel JSON artifact")
@click.option("--verbose", is_flag=True, help="Log at DEBUG level")
def build_kernel_command(m, quad_resolution, out, verbose):
    from src.egorovga.algebra.mollifier import build_kernel
    from src.egorovga.utils.serialization import save_kernel

    _configure_logging(verbose)
    try:
        built = build_kernel(m=m, quad_resolution=quad_resolution)
        save_kernel(built, out)
    except EgorovError as error:
        _fail(error)

    click.echo(f"Kernel m={built.m} (q={built.q}) written to {out}")
    click.echo(f"  condition number: {built.condition_number:.3e}")
    click.echo(f"  max moment residual: {max(built.moment_residuals, default=0.0):.3e}")


@click.command("run")
@click.argument("scenario_path", type=click.Path(dir_okay=False))
@click.option("--out", "out", type=click.Path(file_okay=False), default=None, help="Artifact directory")
@click.option("--verbose", is_flag=True, help="Log at DEBUG level and show check details")
def run_scenario(scenario_path, out, verbose):
    """Run the checks named in a scenario TOML file."""
    from src.egorovga.checks import CHECK_CLASSES
    from src.egorovga.utils.scenario_loader import ScenarioLoader

    _configure_logging(verbose)
    try:
        scenario = ScenarioLoader(CHECK_CLASSES).load(scenario_path)
    except EgorovError as error:
        _fail(error)
    _execute(scenario, out, verbose)


@click.command("verify")
@click.argument("name", type=click.Choice(VERIFY_CHOICES))
@click.option("--m", "m", type=int, default=None, help="Number of vanishing even moments")
@click.option("--rho-min", type=str, default=None, help="Finest grid value, e.g. 2^-16")
@click.option("--seed", type=int, default=None, help="Sampling seed")
@click.option("--out", "out", type=click.Path(file_okay=False), default=None, help="Artifact directory")
@click.option("--mode", default="default", help="Configuration mode")
@click.option("--verbose", is_flag=True, help="Log at DEBUG level and show check details")
def verify(name, m, rho_min, seed, out, mode, verbose):
    """Run one named verification."""
    from src.egorovga.utils.scenario_loader import Scenario

    _configure_logging(verbose)
    try:
        config = _build_verify_config(mode, m, rho_min, seed)
    except EgorovError as error:
        _fail(error)
    _execute(Scenario(name=f"verify-{name}", config=config, checks=[name]), out, verbose)


@click.command()
@click.argument("mode", required=False)
def show_config(mode):
    if not mode:
        _display_available_modes()
        return

    try:
        mode_config = ConfigFactory.from_mode(Mode(mode.lower()))
        click.echo(mode_config)
    except (ValueError, ConfigurationError):
        click.echo(f"Invalid mode: {mode}")


@click.command()
def show_env_vars():
    _display_environment_variables_help()


def _execute(scenario, out, verbose):
    from src.egorovga.reporters import ConsoleReporter, write_artifacts
    from src.egorovga.runners import ScenarioRunner

    try:
        report = ScenarioRunner(scenario).run()
    except (KernelError, ScenarioError, ConfigurationError) as error:
        _fail(error)

    ConsoleReporter(verbose=verbose).report_batch(report)
    if out:
        try:
            write_artifacts(report, out, digits=scenario.config.run.float_digits)
        except ReportingError as error:
            _fail(error)
        click.echo(f"Artifacts written to {Path(out)}")

    sys.exit(EXIT_SUCCESS if report.summary.all_passed else EXIT_CHECK_FAILURE)


def _build_verify_config(mode: str, m, rho_min, seed):
    try:
        config = ConfigFactory.from_mode(Mode(mode.lower()))
    except ValueError as error:
        raise ConfigurationError(f"Invalid mode: {mode}") from error

    overrides = {}
    if m is not None:
        overrides["kernel"] = {"m": m}
    if rho_min is not None:
        overrides["grid"] = {"rho_exponent_max": _parse_rho_min(rho_min)}
    if seed is not None:
        overrides["sampling"] = {"seed": seed}
    config = config.with_overrides(**overrides)
    if config.grid.rho_exponent_max < config.grid.rho_exponent_min:
        raise ConfigurationError(
            f"--rho-min must not exceed 2^-{config.grid.rho_exponent_min}, got {rho_min}"
        )
    return config


def _parse_rho_min(text: str) -> int:
    """Exponent j of a dyadic value written as ``2^-j``, ``2**-j`` or a plain number."""
    cleaned = text.strip().replace("**", "^")
    try:
        if cleaned.startswith("2^"):
            exponent = -int(cleaned[2:])
        else:
            value = float(cleaned)
            if value <= 0:
                raise ValueError(text)
            exponent = -math.log2(value)
    except ValueError as error:
        raise ConfigurationError(f"Invalid --rho-min value: {text!r}") from error
    if exponent <= 0 or abs(exponent - round(exponent)) > 1e-9:
        raise ConfigurationError(f"--rho-min must be a power 2^-j with j > 0, got {text!r}")
    return int(round(exponent))


def _configure_logging(verbose: bool):
    LoggerFactory.setup_logging(logging.DEBUG if verbose else logging.WARNING, rich=verbose)


def _fail(error: Exception):
    click.echo(f"Error: {error}", err=True)
    sys.exit(EXIT_CONFIG_ERROR)


def _display_available_modes():
    click.echo("Available modes: default, fast, strict, custom")
    click.echo(f"\nFor custom mode, set environment variables with {ENV_PREFIX} prefix:")
    click.echo(f"Example: {ENV_PREFIX}KERNEL_M=3")


def _display_environment_variables_help():
    click.echo("egorov-ga Custom Configuration Environment Variables")
    click.echo("=" * 60)

    _display_kernel_variables()
    _display_quadrature_variables()
    _display_sampling_variables()
    _display_grid_variables()
    _display_tolerance_variables()
    _display_regularity_variables()
    _display_usage_examples()


def _display_kernel_variables():
    click.echo("\nKernel:")
    click.echo(f"  {ENV_PREFIX}KERNEL_M=2")
    click.echo(f"  {ENV_PREFIX}KERNEL_QUAD_RESOLUTION=128")
    click.echo(f"  {ENV_PREFIX}KERNEL_TABLE_SIZE=4096")
    click.echo(f"  {ENV_PREFIX}TRUNCATION_ORDER=8")


def _display_quadrature_variables():
    click.echo("\nQuadrature:")
    click.echo(f"  {ENV_PREFIX}QUAD_NODES_PER_AXIS=128")
    click.echo(f"  {ENV_PREFIX}QUAD_LOCAL_SUBSTITUTION=true")
    click.echo(f"  {ENV_PREFIX}QUAD_PAIRING_NODES=48")
    click.echo(f"  {ENV_PREFIX}QUAD_PAIRING_PANELS=4")


def _display_sampling_variables():
    click.echo("\nSampling:")
    click.echo(f"  {ENV_PREFIX}SAMPLING_N_BASE=4")
    click.echo(f"  {ENV_PREFIX}SAMPLING_OFFSET_EXPONENTS=1,2")
    click.echo(f"  {ENV_PREFIX}SAMPLING_MARGIN_FRACTION=0.05")
    click.echo(f"  {ENV_PREFIX}SAMPLING_WINDOW=2.0")
    click.echo(f"  {ENV_PREFIX}SEED=7")


def _display_grid_variables():
    click.echo("\nRho grid:")
    click.echo(f"  {ENV_PREFIX}RHO_EXPONENT_MIN=8")
    click.echo(f"  {ENV_PREFIX}RHO_EXPONENT_MAX=16")
    click.echo(f"  {ENV_PREFIX}RHO_MAX=0.5")


def _display_tolerance_variables():
    click.echo("\nTolerances:")
    click.echo(f"  {ENV_PREFIX}TOL_MONAD=1e-9")
    click.echo(f"  {ENV_PREFIX}TOL_ASSOCIATION=1e-7")
    click.echo(f"  {ENV_PREFIX}TOL_FIT_RESIDUAL=1e-6")
    click.echo(f"  {ENV_PREFIX}TOL_FIT_FLOOR=1e-10")


def _display_regularity_variables():
    click.echo("\nRegularity:")
    click.echo(f"  {ENV_PREFIX}ALPHA_MAX=6")
    click.echo(f"  {ENV_PREFIX}SLOPE_THRESHOLD=0.5")


def _display_usage_examples():
    click.echo("\nUsage Examples:")
    click.echo("  # Cap parallelism in any mode:")
    click.echo(f"  export {ENV_PREFIX}THREADS=4")
    click.echo("")
    click.echo("  # Verify polynomial reproduction with a three-moment kernel:")
    click.echo(f"  export {ENV_PREFIX}KERNEL_M=3")
    click.echo("  egorov-ga verify polynomials --mode custom")
