"""Command-line front end.

Every command writes CSV, JSON or plain text to stdout, to ``--output``, or,
when ``QMIN_OUTPUT_DIR`` is set and no ``--output`` is given, to
``$QMIN_OUTPUT_DIR/<command>.<format>``.  Failures print a JSON error object
to stderr and exit non-zero:

    2  bad flags or unparsable values
    3  input outside the mathematical domain
    4  resource cap exceeded
    1  a verification threshold failed (verify-constants, diagnostics)
    5  any other library error
"""
from __future__ import annotations

import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import expectation, farey, montecarlo
from .pmf import Q_CAP, interval_decomposition, support_bound
from .pmf import pmf as compute_pmf
from .errors import InvalidInput, QminError, ResourceLimit
from .rational import parse_rational, to_text

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "QMIN_OUTPUT_DIR"


class RationalParam(click.ParamType):
    name = "rational"

    def __init__(self, open_unit: bool = False):
        self.open_unit = open_unit

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            r = value
        else:
            try:
                r = parse_rational(value)
            except (TypeError, ValueError) as exc:
                self.fail(str(exc), param, ctx)
        if self.open_unit and not 0 < r < 1:
            self.fail(f"{value} is not in the open interval (0, 1)", param, ctx)
        return r


DELTA = RationalParam(open_unit=True)
RATIONAL = RationalParam()


def _emit(ctx: click.Context, text: str, fmt: str) -> None:
    path = ctx.obj.get("output")
    if path is None and os.environ.get(OUTPUT_DIR_ENV):
        path = Path(os.environ[OUTPUT_DIR_ENV]) / f"{ctx.info_name}.{fmt}"
    if path is None:
        click.echo(text, nl=not text.endswith("\n"))
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text if text.endswith("\n") else text + "\n")


def _dump(obj: dict) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **obj})


def _csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, columns, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _text(obj: dict) -> str:
    return "\n".join(f"{k}: {v}" for k, v in obj.items()) + "\n"


def _render(ctx, obj: dict, fmt: str) -> None:
    if fmt == "json":
        _emit(ctx, _dump(obj), fmt)
    elif fmt == "csv":
        _emit(ctx, _csv([obj], list(obj)), fmt)
    else:
        _emit(ctx, _text(obj), fmt)


def _format_option(default="json"):
    return click.option(
        "--format", "fmt", type=click.Choice(["csv", "json", "text"]), default=default, show_default=True
    )


@click.group()
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None, help="Write to this file.")
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--q-cap", type=click.IntRange(min=1), default=Q_CAP, show_default=True,
              help="Largest support bound the PMF route will attempt.")
@click.pass_context
def cli(ctx, output, threads, q_cap):
    """Smallest denominators in random intervals of length delta."""
    ctx.ensure_object(dict)
    ctx.obj.update(output=output, threads=threads, q_cap=q_cap)


@cli.command()
@click.option("--x", "x", type=RATIONAL, help="Interval centre.")
@click.option("--delta", type=DELTA, help="Interval length (radius delta/2 by default).")
@click.option("--lo", type=RATIONAL, help="Open interval lower end (instead of --x/--delta).")
@click.option("--hi", type=RATIONAL, help="Open interval upper end.")
@click.option("--radius-convention", type=click.Choice(montecarlo.RADIUS_CONVENTIONS), default="half-delta")
@_format_option()
@click.pass_context
def qmin(ctx, x, delta, lo, hi, radius_convention, fmt):
    """Smallest-denominator fraction in an open interval."""
    if lo is not None or hi is not None:
        if lo is None or hi is None:
            raise click.UsageError("--lo and --hi must be given together")
    elif x is not None and delta is not None:
        r = delta / 2 if radius_convention == "half-delta" else delta
        lo, hi = x - r, x + r
    else:
        raise click.UsageError("give either --x and --delta, or --lo and --hi")
    f = farey.smallest_denominator(lo, hi)
    _render(ctx, {"fraction": to_text(f), "q_min": f.denominator, "lo": to_text(lo), "hi": to_text(hi)}, fmt)


@cli.command()
@click.option("--delta", type=DELTA, required=True)
@click.option("--method", type=click.Choice(["grouped", "direct"]), default="grouped", show_default=True)
@_format_option("csv")
@click.pass_context
def pmf(ctx, delta, method, fmt):
    """Exact probability mass function, one row per denominator."""
    table = compute_pmf(delta, method=method, q_cap=ctx.obj["q_cap"])
    if fmt == "csv":
        _emit(ctx, table.to_csv(), fmt)
    elif fmt == "json":
        _emit(ctx, table.to_json(), fmt)
    else:
        lines = [f"delta = {to_text(delta)}, Q = {table.support_bound}"]
        lines += [f"{q}\t{to_text(p)}\t{float(p):.12g}" for q, p in table.items()]
        _emit(ctx, "\n".join(lines) + "\n", fmt)


DECOMP_COLUMNS = ["fraction", "case", "lo", "hi", "length", "length_float", "wraps"]


@cli.command()
@click.option("--delta", type=DELTA, required=True)
@_format_option("csv")
@click.pass_context
def decompose(ctx, delta, fmt):
    """Per-fraction sets of centres with their case tags and exact endpoints."""
    rows = [
        {
            "fraction": to_text(r.fraction),
            "case": r.case.value,
            "lo": to_text(r.lo),
            "hi": to_text(r.hi),
            "length": to_text(r.length),
            "length_float": float(r.length),
            "wraps": r.wraps,
        }
        for r in interval_decomposition(delta)
    ]
    if fmt == "json":
        _emit(ctx, _dump({"delta": to_text(delta), "records": rows}), fmt)
    elif fmt == "csv":
        _emit(ctx, _csv(rows, DECOMP_COLUMNS), fmt)
    else:
        _emit(ctx, "".join(f"{r['fraction']}\t{r['case']}\t{r['length']}\n" for r in rows), fmt)


@cli.command()
@click.option("--delta", type=DELTA, required=True)
@click.option("--method", type=click.Choice(["auto", "pmf", "mobius", "both"]), default="auto", show_default=True)
@_format_option()
@click.pass_context
def expect(ctx, delta, method, fmt):
    """Exact expected smallest denominator."""
    q_cap = ctx.obj["q_cap"]
    if method == "auto":
        fits = support_bound(delta) <= q_cap
        method = "pmf" if fits or delta >= Fraction(1, 2) else "mobius"
    obj: dict = {"delta": to_text(delta)}
    values = []
    if method in ("pmf", "both"):
        v = expectation.expected_value_pmf(delta, q_cap=q_cap)
        obj["pmf"] = to_text(v)
        values.append(v)
    if method in ("mobius", "both"):
        v = expectation.expected_value_mobius(delta)
        obj["mobius"] = to_text(v)
        values.append(v)
    if method == "both":
        obj["equal"] = values[0] == values[1]
    obj["float"] = float(values[0])
    obj["asymptotic"] = expectation.asymptotic_estimate(delta)
    _render(ctx, obj, fmt)


@cli.command()
@click.option("--t", "t", type=RATIONAL, required=True)
@_format_option()
@click.pass_context
def sfunc(ctx, t, fmt):
    """Exact value of S(t)."""
    if t <= 0:
        raise InvalidInput("t must be positive")
    s = expectation.s_function(t)
    _render(ctx, {"t": to_text(t), "S": to_text(s), "S_float": float(s),
                  "S_sqrt_t": float(s) * float(t) ** 0.5}, fmt)


@cli.command("verify-constants")
@click.option("--tolerance", type=click.FloatRange(min=0, min_open=True), default=1e-8, show_default=True)
@_format_option()
@click.pass_context
def verify_constants(ctx, tolerance, fmt):
    """Numerically check D = 4 - 2 sqrt 2 and C = 8/3; exit 1 on failure."""
    rep = expectation.verify_constants(tolerance)
    _render(ctx, rep.as_dict(), fmt)
    ctx.exit(0 if rep.passed else 1)


DEFAULT_DIAG = "1/100,1/1000,1/10000,1/100000"


@cli.command()
@click.option("--deltas", default=DEFAULT_DIAG, show_default=True, help="Comma-separated deltas in (0, 1/2).")
@_format_option("csv")
@click.pass_context
def diagnostics(ctx, deltas, fmt):
    """Exact E against the asymptotic law; exit 1 when the trend checks fail.

    The checks: |ratio - 1| does not increase along the list, and every
    |normalized deficit| stays within twice the first one.
    """
    try:
        ds = [parse_rational(s) for s in deltas.split(",") if s.strip()]
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--deltas")
    reports = expectation.asymptotic_diagnostics(ds)
    if fmt == "json":
        _emit(ctx, expectation.reports_to_json(reports), fmt)
    elif fmt == "csv":
        _emit(ctx, expectation.reports_to_csv(reports), fmt)
    else:
        _emit(ctx, "".join(f"{to_text(r.delta)}\t{float(r.exact_value):.10g}\t{r.ratio:.8f}\n"
                           for r in reports), fmt)
    ctx.exit(0 if diagnostics_pass(reports) else 1)


def diagnostics_pass(reports) -> bool:
    gaps = [abs(r.ratio - 1) for r in reports]
    monotone = all(b <= a for a, b in zip(gaps, gaps[1:]))
    if not reports:
        return True
    first = abs(reports[0].normalized_deficit)
    bounded = all(abs(r.normalized_deficit) <= 2 * first for r in reports)
    return monotone and bounded


def _sample_options(f):
    f = click.option("--delta", type=DELTA, required=True)(f)
    f = click.option("--n", "n", type=click.IntRange(min=1), default=100_000, show_default=True)(f)
    f = click.option("--seed", type=int, default=0, show_default=True)(f)
    f = click.option("--radius-convention", type=click.Choice(montecarlo.RADIUS_CONVENTIONS),
                     default="half-delta", show_default=True)(f)
    return f


@cli.command()
@_sample_options
@_format_option()
@click.pass_context
def sample(ctx, delta, n, seed, radius_convention, fmt):
    """Monte Carlo histogram of the smallest denominator."""
    hist = montecarlo.sample_qmin(delta, n, seed, radius_convention, threads=ctx.obj["threads"])
    if fmt == "json":
        _emit(ctx, hist.to_json(), fmt)
    elif fmt == "csv":
        _emit(ctx, hist.to_csv(), fmt)
    else:
        _emit(ctx, "".join(f"{q}\t{c}\n" for q, c in sorted(hist.counts.items())), fmt)


@cli.command()
@click.option("--delta", type=DELTA, default=None)
@click.option("--n", "n", type=click.IntRange(min=1), default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--histogram", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON histogram written by `sample`; sampling is skipped.")
@_format_option()
@click.pass_context
def compare(ctx, delta, n, seed, histogram, fmt):
    """Compare a Monte Carlo histogram with the exact PMF and mean."""
    if histogram is not None:
        hist = montecarlo.EmpiricalHistogram.from_json(Path(histogram).read_text())
    elif delta is not None:
        hist = montecarlo.sample_qmin(delta, n, seed, threads=ctx.obj["threads"])
    else:
        raise click.UsageError("give --delta or --histogram")
    table = compute_pmf(hist.interval_length, q_cap=ctx.obj["q_cap"])
    rep = montecarlo.compare_empirical(hist, table)
    _render(ctx, {"delta": to_text(hist.delta), **rep.as_dict()}, fmt)


_EXIT = {InvalidInput: 3, ResourceLimit: 4}


def _fail(kind: str, message: str, code: int) -> int:
    click.echo(json.dumps({"schema_version": SCHEMA_VERSION, "error": {"type": kind, "message": message}}),
               err=True)
    return code


def main(argv=None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="qmin", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        return _fail("parse_error", e.format_message(), 2)
    except click.Abort:
        return _fail("aborted", "aborted", 2)
    except QminError as e:
        code = next((c for cls, c in _EXIT.items() if isinstance(e, cls)), 5)
        return _fail(e.code, str(e), code)
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(main())
