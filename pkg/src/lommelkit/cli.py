import functools
import json
import sys
from pathlib import Path

import click
from pydantic import ValidationError

from lommelkit import __version__
from lommelkit.core.config import load_settings
from lommelkit.core.errors import BoundViolation, LommelError
from lommelkit.core.logging import configure_logging
from lommelkit.core.types import Evaluation, OrderPair
from lommelkit.modules.asymptotics.expansions import ExpansionKind, asymptotic, relative_error
from lommelkit.modules.bounds.catalog import catalog_manifest, evaluate_bound, get_entry
from lommelkit.modules.bounds.sweep import GridSpec, sweep
from lommelkit.modules.evaluation import functions
from lommelkit.modules.identities.residuals import identity_suite
from lommelkit.modules.reproduction.tables import TABLE_IDS, compare_reference, run_table, table_spec

EXIT_USAGE = 2

_FUNCTIONS = {
    "t": lambda p, x, o: functions.lommel_t(p, x, o),
    "t_tilde": lambda p, x, o: functions.lommel_t_tilde(p, x, o),
    "T_tilde": lambda p, x, o: functions.lommel_T_tilde(p, x, o),
    "i": lambda p, x, o: functions.bessel_i(p.nu, x, o),
    "l": lambda p, x, o: functions.struve_l(p.nu, x, o),
    "a": lambda p, x, o: functions.coeff_a(p, x),
    "b": lambda p, x, o: functions.ratio_b(p, x, o),
    "cond": lambda p, x, o: functions.condition_number("lommel_t_tilde", p, x, o),
    "cond_i": lambda p, x, o: functions.condition_number("bessel_i", p, x, o),
    "h": lambda p, x, o: functions.ratio_h(p, x, o),
    "r": lambda p, x, o: functions.ratio_r(p.nu, x, o),
}


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def handle_errors(func):
    """Map library errors to exit codes with the message on stderr."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except LommelError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(exc.exit_code)
        except (ValidationError, FileNotFoundError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_USAGE)

    return wrapper


@click.group()
@click.version_option(version=__version__, prog_name="lommelkit")
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR (default: LOMMEL_LOG_LEVEL or WARNING)")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="Settings file (default: .lommelkit.yaml if present)")
@click.pass_context
def main(ctx, log_level, config_path):
    """Modified Lommel functions: evaluation, bounds and verification."""
    try:
        settings = load_settings(config_path)
    except (ValidationError, FileNotFoundError, ValueError, TypeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    configure_logging(log_level or settings.log_level)
    ctx.obj = settings


@main.command("eval")
@click.option("--fn", "fn", required=True, type=click.Choice(sorted(_FUNCTIONS)))
@click.option("--mu", type=float, default=0.0)
@click.option("--nu", type=float, required=True)
@click.option("--x", "x", type=float, required=True)
@click.option("--scaled", is_flag=True, default=False, help="Print value,log_scale instead of the true value")
@click.option("--tol", type=float, default=None, help="Relative tolerance")
@click.option("--oracle", is_flag=True, default=False, help="Evaluate in extended precision")
@click.pass_obj
@handle_errors
def eval_cmd(settings, fn, mu, nu, x, scaled, tol, oracle):
    """Evaluate one function at (mu, nu, x)."""
    opts = settings.eval
    if tol is not None:
        opts = opts.replace(rel_tol=tol)
    if oracle:
        opts = opts.replace(oracle_mode=True)
    result = _FUNCTIONS[fn](OrderPair(mu, nu), x, opts)
    if isinstance(result, Evaluation):
        if scaled:
            click.echo(f"{_fmt(result.value)},{_fmt(float(result.log_scale))}")
        else:
            click.echo(_fmt(result.true_value()))
    else:
        click.echo(_fmt(float(result)))


@main.command()
@click.option("--id", "entry_id", default=None, help="Catalog id")
@click.option("--mu", type=float, default=None)
@click.option("--nu", type=float, default=None)
@click.option("--x", "x", type=float, default=None)
@click.option("--y", "y", type=float, default=None, help="Second argument of ratio-in-x entries")
@click.option("--manifest", is_flag=True, default=False, help="Print the catalog as JSON")
@click.pass_obj
@handle_errors
def bound(settings, entry_id, mu, nu, x, y, manifest):
    """Evaluate one catalog inequality; exits 4 when it is violated."""
    if manifest:
        if entry_id:
            click.echo(json.dumps(get_entry(entry_id).manifest(), indent=2))
        else:
            click.echo(json.dumps(catalog_manifest(), indent=2))
        return
    if entry_id is None or mu is None or nu is None or x is None:
        raise click.UsageError("--id, --mu, --nu and --x are required unless --manifest is given")

    result = evaluate_bound(entry_id, OrderPair(mu, nu), x, y, settings.eval.replace(oracle_mode=True))
    for key in (
        "entry_id", "target_value", "lower", "upper", "margin_lower", "margin_upper",
        "lower_relerr", "upper_relerr", "log_scale", "guard", "equality_hit", "near_boundary",
    ):
        click.echo(f"{key}={_fmt(getattr(result, key))}")
    click.echo(f"domain: {result.domain_verdict}")
    if result.violations:
        raise BoundViolation(f"{entry_id} violated on the {', '.join(result.violations)} side")


@main.command()
@click.option("--id", "table_id", required=True, type=click.Choice([str(t) for t in TABLE_IDS]))
@click.option("--out", "out", type=click.Path(dir_okay=False), default=None,
              help="Write the comparison CSV here (default: stdout)")
@click.option("--workers", type=int, default=None)
@click.pass_obj
@handle_errors
def table(settings, table_id, out, workers):
    """Regenerate a relative-error table and diff it against the reference."""
    workers = workers if workers is not None else settings.sweep.workers
    report = run_table(table_spec(int(table_id)), settings.eval, workers=workers)
    diff = compare_reference(report)
    if out:
        diff.write_csv(Path(out))
    else:
        click.echo(diff.to_csv(), nl=False)
    summary = (
        f"table={table_id} cells={len(diff.cells)} failures={len(diff.failures())} "
        f"max_abs_diff={_fmt(report.max_abs_diff)}"
    )
    click.echo(summary, err=not out)
    for cell in diff.failures():
        click.echo(
            f"mismatch {cell.param} x={cell.x:g} computed={_fmt(cell.computed)} "
            f"reference={_fmt(cell.reference)}",
            err=True,
        )
    sys.exit(0 if diff.passed else 1)


@main.command()
@click.option("--seed", type=int, default=None)
@click.option("--samples", type=int, default=None, help="Random sites for the inequality sweep")
@click.option("--identity-samples", type=int, default=200, show_default=True,
              help="Random sites for the identity suite")
@click.option("--workers", type=int, default=None)
@click.pass_obj
@handle_errors
def verify(settings, seed, samples, identity_samples, workers):
    """Sweep the whole catalog and the identity suite; exits 4 on any failure."""
    cfg = settings.sweep
    seed = cfg.seed if seed is None else seed
    samples = cfg.samples if samples is None else samples
    workers = cfg.workers if workers is None else workers
    # residuals are held to 1e-12 at x up to x_max, below double-precision reach
    opts = settings.eval.replace(oracle_mode=True)

    report = sweep(seed, samples, opts=opts, spec=GridSpec(x_max=cfg.x_max), workers=workers)
    click.echo(
        f"sweep seed={seed} points={report.points} checks={report.checks} "
        f"equality_checks={report.equality_checks} violations={len(report.violations)} "
        f"failures={len(report.failures)}"
    )
    for v in report.violations:
        click.echo(
            f"violation {v.entry_id} {v.side} mu={v.mu:.17g} nu={v.nu:.17g} x={v.x:.17g} "
            f"margin={v.margin:.3e} guard={v.guard:.3e}",
            err=True,
        )

    identities = identity_suite(seed, identity_samples, opts, x_max=cfg.x_max)
    click.echo(
        f"identities points={identities.points} checks={identities.checks} "
        f"skipped={identities.skipped} failures={len(identities.failures)}"
    )
    for f in identities.failures:
        click.echo(
            f"residual {f.name} mu={f.mu:.17g} nu={f.nu:.17g} x={f.x:.17g} residual={f.residual:.3e}",
            err=True,
        )

    if not (report.ok and identities.ok and not report.failures):
        raise BoundViolation("verification failed")
    click.echo("ok")


@main.command()
@click.option("--kind", required=True, type=click.Choice([k.value for k in ExpansionKind]))
@click.option("--mu", type=float, default=0.0)
@click.option("--nu", type=float, required=True)
@click.option("--x", "x", type=float, required=True)
@click.option("--relerr", is_flag=True, default=False, help="Also print |expansion/exact - 1|")
@handle_errors
def asym(kind, mu, nu, x, relerr):
    """Evaluate a leading-order asymptotic expansion."""
    p = OrderPair(mu, nu)
    click.echo(_fmt(asymptotic(kind, p, x)))
    if relerr:
        click.echo(f"relerr={relative_error(kind, p, x):.6e}")


if __name__ == "__main__":
    main()
