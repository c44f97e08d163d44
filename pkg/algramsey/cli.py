"""Command line: instance building, extraction, regularity, exact oracles and verification sweeps."""

import functools
from pathlib import Path

import click

from algramsey import app
from algramsey.config import RunConfig, load_run_config
from algramsey.constructions import FORMULA_SHAPES, er_polarity, frankl_wilson, paley, random_algebraic
from algramsey.errors import EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_VERIFICATION, AlgRamseyError, VerificationFailed
from algramsey.suites import get_suites
from algramsey.utils import frac_str, parse_fraction, section

PATH_IN = click.Path(exists=True, dir_okay=False, readable=True, path_type=Path)
PATH_OUT = click.Path(dir_okay=False, writable=True, path_type=Path)
INSTANCE_ARG = click.argument("instance_file", type=PATH_IN, required=False)


def _fraction(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_fraction(value)
    except (ValueError, ZeroDivisionError, AlgRamseyError) as e:
        raise click.BadParameter(str(e)) from e


def common_options(command):
    """--config, --seed, --budget and --verbose, shared by every subcommand."""

    @click.option("--config", "config_path", type=PATH_IN, help="YAML run configuration.")
    @click.option("--seed", type=int, help="Root seed (overrides the configuration).")
    @click.option("--budget", type=int, help="Tuple-evaluation budget (overrides the configuration).")
    @click.option("--verbose", is_flag=True, help="Print progress checkpoints.")
    @functools.wraps(command)
    def wrapper(*args, config_path=None, seed=None, budget=None, verbose=False, **kwargs):
        config = load_run_config(config_path)
        if seed is not None:
            config.seed = seed
        if budget is not None:
            config.budgets.tuple_evaluations = budget
        observer = _print_observer if verbose else None
        return command(*args, config=config, observer=observer, **kwargs)

    return wrapper


def _print_observer(event_type: str, payload: dict):
    details = " ".join(f"{key}={value}" for key, value in payload.items() if not isinstance(value, (dict, list)))
    click.echo(f"    [{event_type}] {details}")


def _instance_path(instance_file: Path | None, config: RunConfig) -> Path:
    """The INSTANCE_FILE argument, else the `instance` of the run configuration."""
    if instance_file is not None:
        return instance_file
    if config.instance is None:
        raise click.UsageError("no INSTANCE_FILE given and the configuration names no instance")
    return config.instance


def _emit(model, out: Path | None, config: RunConfig, default_name: str):
    # without --out, reports go to the configured output directory when there is one
    if out is None and config.output_dir is not None:
        out = config.output_dir / default_name
    if out is not None:
        app.write_report(model, out)
        click.echo(f"\n  Report saved to {out}")


@click.group(context_settings={"max_content_width": 120})
def cli():
    """Algebraic hypergraph Ramsey engine."""


@cli.command()
@INSTANCE_ARG
@common_options
def build(instance_file: Path | None, config: RunConfig, observer=None):
    """Validate an instance file and print its summary."""
    inst = app.load_instance(_instance_path(instance_file, config), config.budgets)
    summary = app.instance_summary(inst, config.budgets)
    click.echo(section("Instance"))
    for key, value in summary.items():
        click.echo(f"    {key}: {value}")
    return EXIT_OK


@cli.command()
@INSTANCE_ARG
@click.option("--mode", type=click.Choice(app.RAMSEY_MODES), default="graph", show_default=True)
@click.option("--beta", callback=_fraction, help="Exponent parameter in (0, 1), e.g. 1/2.")
@click.option("--out", type=PATH_OUT, help="Where to write the RamseyResult JSON.")
@common_options
def ramsey(instance_file: Path | None, mode: str, beta, out, config: RunConfig, observer=None):
    """Extract a verified clique, independent set or monochromatic clique."""
    inst = app.load_instance(_instance_path(instance_file, config), config.budgets)
    if mode != "hypergraph" and inst.r != 2:
        raise click.UsageError(f"--mode {mode} needs a graph instance (r = 2), got r = {inst.r}")
    if beta is not None:
        config.beta = beta
    result = app.run_ramsey(inst, mode, config, observer)
    click.echo(section("Ramsey extraction"))
    click.echo(f"    instance: {inst.name} (N = {inst.N})")
    click.echo(f"    kind: {result.kind}")
    click.echo(f"    size: {result.achieved_size}")
    click.echo(f"    vertices: {result.vertices}")
    if result.pattern is not None:
        click.echo(f"    pattern: {result.pattern}")
    if result.color is not None:
        click.echo(f"    color: {result.color}")
    if result.bound_context.target is not None:
        click.echo(f"    asymptotic target: {result.bound_context.target:.4g}")
    for note in result.trace.notes:
        click.echo(f"    note: {note}")
    click.echo(f"    verified: {result.verified}")
    _emit(result, out, config, "ramsey.json")
    return EXIT_OK if result.verified else EXIT_VERIFICATION


@cli.command()
@INSTANCE_ARG
@click.option("--epsilon", callback=_fraction, help="Homogeneity parameter in (0, 1/4].")
@click.option("--out", type=PATH_OUT, help="Where to write the regularity JSON.")
@common_options
def regularity(instance_file: Path | None, epsilon, out, config: RunConfig, observer=None):
    """Equitable partition with all but an epsilon fraction of tuples empty or dense."""
    inst = app.load_instance(_instance_path(instance_file, config), config.budgets)
    if inst.kind != "stronglyAlgebraic":
        raise click.UsageError(f"regularity needs a stronglyAlgebraic instance, got {inst.kind}")
    if epsilon is not None:
        config.epsilon = epsilon
    try:
        result = app.run_regularity(inst, config, observer)
    except VerificationFailed as e:
        click.echo(f"\n  {e}", err=True)
        if e.report is not None:
            _emit(e.report, out, config, "regularity.json")
        return EXIT_VERIFICATION
    report = result.report
    click.echo(section("Regularity partition"))
    click.echo(f"    K: {report.k} (from L = {result.initial_parts})")
    click.echo(f"    epsilon: {frac_str(report.epsilon)}, eps0: {frac_str(result.epsilon0)}")
    click.echo(
        f"    tuples: {report.tuples_total} = {report.tuples_empty} empty"
        f" + {report.tuples_dense} dense + {report.tuples_bad} bad"
    )
    click.echo(f"    bad fraction: {frac_str(report.bad_fraction)}")
    click.echo(f"    K > 8/epsilon: {report.k_bounds_ok}")
    if report.k_reference is not None:
        click.echo(f"    K / (1/epsilon)^(r!(2n+1)): {report.k_ratio:.3g}")
    for note in result.notes:
        click.echo(f"    note: {note}")
    _emit(result, out, config, "regularity.json")
    return EXIT_OK


@cli.command()
@click.option("--suite", type=click.Choice(["all", *get_suites()]), default="all", show_default=True)
@click.option("--out", type=PATH_OUT, default=Path("sweep.csv"), show_default=True, help="CSV destination.")
@click.option("--pdf", "pdf_path", type=PATH_OUT, help="Also render the sweep as a PDF.")
@common_options
def verify(suite: str, out: Path, pdf_path, config: RunConfig, observer=None):
    """Run bound sweeps and write one pass/fail row per check."""
    sweeps = app.main(suite, config, observer=observer, csv_path=out, pdf_path=pdf_path)
    click.echo(section("Verification"))
    failed = 0
    for name, title, _, rows in sweeps:
        passed = sum(1 for row in rows if row.passed)
        failed += len(rows) - passed
        click.echo(f"    {name}: {passed} of {len(rows)} checks passed ({title})")
    click.echo(f"\n  Sweep table saved to {out}")
    if pdf_path is not None:
        click.echo(f"  Sweep printout saved to {pdf_path}")
    return EXIT_OK if failed == 0 else EXIT_VERIFICATION


@cli.command()
@INSTANCE_ARG
@click.option("--what", type=click.Choice(app.ORACLE_TARGETS), default="clique", show_default=True)
@common_options
def oracle(instance_file: Path | None, what: str, config: RunConfig, observer=None):
    """Exact clique number, independence number or balanced bi-clique."""
    inst = app.load_instance(_instance_path(instance_file, config), config.budgets)
    result = app.run_oracle(inst, what, config.budgets)
    click.echo(section(f"Exact {what}"))
    if what == "biclique":
        click.echo(f"    t: {result.t}")
        click.echo(f"    A: {result.a}")
        click.echo(f"    B: {result.b}")
    else:
        click.echo(f"    size: {result.size}")
        click.echo(f"    witness: {result.witness}")
    click.echo(f"    nodes: {result.nodes}")
    return EXIT_OK


@cli.group()
def generate():
    """Write canonical or random instance files."""


def _write_instance(inst, out: Path):
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(inst.to_file().to_json() + "\n", encoding="utf-8")
    click.echo(f"\n  {inst.name} (N = {inst.N}) saved to {out}")
    return EXIT_OK


@generate.command("paley")
@click.option("--p", "p", type=int, required=True, help="Prime = 1 mod 4.")
@click.option("--variant", type=click.Choice(["sum", "difference"]), default="sum", show_default=True)
@click.option("--out", type=PATH_OUT, required=True)
def generate_paley(p: int, variant: str, out: Path):
    return _write_instance(paley(p, variant), out)


@generate.command("fw")
@click.option("--n", "n", type=int, required=True, help="Ground set size.")
@click.option("--p", "p", type=int, default=2, show_default=True)
@click.option("--complement", is_flag=True, help="Edge iff <u,v> + 1 = 0.")
@click.option("--out", type=PATH_OUT, required=True)
def generate_fw(n: int, p: int, complement: bool, out: Path):
    return _write_instance(frankl_wilson(n, p, complement), out)


@generate.command("er")
@click.option("--q", "q", type=int, required=True, help="Prime field size.")
@click.option("--side", type=click.Choice(["complement", "er"]), default="complement", show_default=True)
@click.option("--out", type=PATH_OUT, required=True)
def generate_er(q: int, side: str, out: Path):
    return _write_instance(er_polarity(q, side), out)


@generate.command("random")
@click.option("--p", "p", type=int, required=True)
@click.option("--n", "n", type=int, default=1, show_default=True)
@click.option("--d", "d", type=int, default=2, show_default=True)
@click.option("--m", "m", type=int, default=1, show_default=True)
@click.option("--r", "r", type=int, default=2, show_default=True)
@click.option("--N", "N", type=int, required=True, help="Number of vertices.")
@click.option("--shape", type=click.Choice(FORMULA_SHAPES), default="strong", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=PATH_OUT, required=True)
def generate_random(p: int, n: int, d: int, m: int, r: int, N: int, shape: str, seed: int, out: Path):
    return _write_instance(random_algebraic(p, n, d, m, r, N, shape, seed), out)


def main(argv=None) -> int:
    """Run the command line and map errors to exit codes (1 usage, 2 validation, 3 verification, 4 budget)."""
    try:
        code = cli.main(args=argv, prog_name="algramsey", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        click.echo("  Aborted.", err=True)
        return EXIT_USAGE
    except AlgRamseyError as e:
        click.echo(f"\n  {type(e).__name__}: {e}", err=True)
        return e.exit_code
    except (FileNotFoundError, ValueError) as e:
        click.echo(f"\n  {type(e).__name__}: {e}", err=True)
        return EXIT_VALIDATION
    return code if isinstance(code, int) else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
