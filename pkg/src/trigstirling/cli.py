"""Command-line front end.

Data goes to stdout (or ``--output``), diagnostics to stderr.  Exit status is
0 on success, 1 when a check fails or cannot be certified, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from fractions import Fraction
from typing import Sequence

from . import analysis, series, specfun
from .analysis import format_rational, margin_digits
from .interval import to_decimal_string

PRECISION_ENV = "TRIGSTIRLING_PRECISION"
MIN_PRECISION, MAX_PRECISION = 64, 4096

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """``p/q`` or an integer; decimals are refused so inputs stay exact."""
    m = _RATIONAL.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer or p/q rational")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise argparse.ArgumentTypeError(f"{text!r} has a zero denominator")
    return Fraction(int(num), int(den) if den else 1)


def parse_precision(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not MIN_PRECISION <= p <= MAX_PRECISION:
        raise argparse.ArgumentTypeError(f"precision must lie in [{MIN_PRECISION}, {MAX_PRECISION}]")
    return p


def parse_grid(text: str) -> list[Fraction]:
    """Grid syntax:

    ``integers:A..B[:STEP]``   integers from A to B inclusive
    ``range:A..B:STEP``        rationals A, A+STEP, ... up to and including B
    ``a,b,c``                  explicit comma-separated rationals
    """
    if ":" in text:
        kind, _, body = text.partition(":")
        parts = body.split(":")
        bounds = parts[0].split("..")
        if len(bounds) != 2 or len(parts) > 2:
            raise argparse.ArgumentTypeError(f"malformed grid {text!r}")
        start, stop = (parse_rational(b) for b in bounds)
        if kind == "integers":
            step = parse_rational(parts[1]) if len(parts) == 2 else Fraction(1)
            if start.denominator != 1 or stop.denominator != 1 or step.denominator != 1:
                raise argparse.ArgumentTypeError(f"integer grid {text!r} has non-integer entries")
        elif kind == "range":
            if len(parts) != 2:
                raise argparse.ArgumentTypeError(f"range grid {text!r} needs a step")
            step = parse_rational(parts[1])
        else:
            raise argparse.ArgumentTypeError(f"unknown grid kind {kind!r}")
        if step <= 0:
            raise argparse.ArgumentTypeError("grid step must be positive")
        values = []
        x = start
        while x <= stop:
            values.append(x)
            x += step
    else:
        values = [parse_rational(t) for t in text.split(",") if t.strip()]
    if not values:
        raise argparse.ArgumentTypeError(f"grid {text!r} is empty")
    return values


def _default_precision() -> int:
    env = os.environ.get(PRECISION_ENV)
    if env is None:
        return specfun.DEFAULT_PRECISION
    try:
        return parse_precision(env)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{PRECISION_ENV}: {exc}") from None


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trigstirling",
        description="Trigamma-corrected Stirling approximations: coefficients, certified bounds, rates.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--output", "-o", default=None, help="write data here instead of stdout")

    prec = argparse.ArgumentParser(add_help=False)
    prec.add_argument("--precision", type=parse_precision, default=None, help="working precision in bits")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", parents=[common], help="exact coefficients of the h(x) expansion")
    p.add_argument("--order", type=int, default=series.REFERENCE_H_ORDER)

    p = sub.add_parser("bounds", parents=[common, prec], help="certify the double inequality at one point")
    p.add_argument("--x", type=parse_rational, required=True)
    p.add_argument("--inequality", choices=sorted(analysis.INEQUALITIES), default="theorem2")
    p.add_argument("--max-precision", type=parse_precision, default=None)

    p = sub.add_parser("sweep", parents=[common, prec], help="certify the double inequality on a grid")
    p.add_argument("--grid", type=parse_grid, default=None)
    p.add_argument("--inequality", choices=sorted(analysis.INEQUALITIES), default="theorem2")
    p.add_argument("--max-precision", type=parse_precision, default=None)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("rate", parents=[common, prec], help="measure the decay of w_n(a)")
    p.add_argument("--a", type=parse_rational, default=Fraction(1, 2))
    p.add_argument("--grid", type=parse_grid, default=None)

    p = sub.add_parser("scan", parents=[common, prec], help="|w_n(a)| over a grid of shifts a")
    p.add_argument("--a-grid", type=parse_grid, default=None)
    p.add_argument("--n", type=int, default=1000)

    sub.add_parser("verify-identities", parents=[common], help="exact checks of the proof identities")
    return parser


def _rows_csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _rows_json(header: Sequence[str], rows: Sequence[Sequence[object]], **meta) -> str:
    doc = dict(meta)
    doc["rows"] = [dict(zip(header, r)) for r in rows]
    return json.dumps(doc, indent=2) + "\n"


def cmd_coeffs(args) -> tuple[str, int]:
    if args.order < 3 or args.order % 2 == 0:
        raise UsageError("--order must be odd and >= 3")
    h = series.h_series(args.order)
    if args.order > series.REFERENCE_H_ORDER:
        print(
            f"note: coefficients beyond x^-{series.REFERENCE_H_ORDER} are extended values "
            "with no published reference",
            file=sys.stderr,
        )
    header = ("exponent", "numerator", "denominator")
    rows = [(k, c.numerator, c.denominator) for k, c in h.items()]
    if args.format == "json":
        return _rows_json(header, rows, order=args.order), 0
    return _rows_csv(header, rows), 0


def cmd_bounds(args) -> tuple[str, int]:
    x = args.x
    if args.inequality == "theorem2" and x < 1:
        raise UsageError("--x must be >= 1 for theorem2")
    if x <= 0:
        raise UsageError("--x must be positive")
    res = specfun.certify_margins(analysis.INEQUALITIES[args.inequality], x, args.precision, args.max_precision)
    digits = margin_digits(res.precision)
    w = specfun.log_ratio(x, Fraction(1, 2), res.precision)
    doc = {
        "x": format_rational(x),
        "inequality": args.inequality,
        "precision": res.precision,
        "w": to_decimal_string(w.mid(), digits),
        "lower_margin": to_decimal_string(res.lower.lo, digits, "floor"),
        "upper_margin": to_decimal_string(res.upper.lo, digits, "floor"),
        "verdict": res.verdict,
    }
    status = 0 if res.verdict == specfun.CERTIFIED else 1
    if args.format == "csv":
        return _rows_csv(list(doc), [list(doc.values())]), status
    return json.dumps(doc, indent=2) + "\n", status


def cmd_sweep(args) -> tuple[str, int]:
    grid = args.grid or [Fraction(n) for n in range(1, 1001)]
    if args.inequality == "theorem2" and min(grid) < 1:
        raise UsageError("--grid values must be >= 1 for theorem2")
    if min(grid) <= 0:
        raise UsageError("--grid values must be positive")
    report = analysis.sweep(grid, args.precision, args.inequality, args.max_precision, max(1, args.workers))
    print(
        f"{len(report.points)} points, {report.failures} not certified, precision {report.precision_used}",
        file=sys.stderr,
    )
    out = report.to_json() if args.format == "json" else report.to_csv()
    return out, 0 if report.failures == 0 else 1


def cmd_rate(args) -> tuple[str, int]:
    grid = args.grid or [Fraction(n) for n in range(1000, 10001, 1000)]
    if any(n.denominator != 1 or n < 1 for n in grid):
        raise UsageError("--grid must contain positive integers")
    report = analysis.convergence_rate(args.a, [int(n) for n in grid], args.precision)
    print(
        f"a = {format_rational(report.a)}: exponent {report.fitted_exponent}, "
        f"limit of n^{report.power} w_n {report.fitted_limit} "
        f"(predicted {report.predicted_limit}, lemma orientation {report.orientation})",
        file=sys.stderr,
    )
    out = report.to_json() if args.format == "json" else report.to_csv()
    return out, 0 if not report.indeterminate else 1


def cmd_scan(args) -> tuple[str, int]:
    a_values = args.a_grid or [Fraction(k, 8) for k in range(9)]
    if args.n < 1:
        raise UsageError("--n must be positive")
    scan = analysis.optimality_scan(a_values, args.n, args.precision)
    best, certified = analysis.scan_argmin(scan)
    digits = margin_digits(args.precision)
    header = ("a", "abs_w_lower", "abs_w_upper")
    rows = [
        (format_rational(a), to_decimal_string(iv.lo, digits, "floor"), to_decimal_string(iv.hi, digits, "ceiling"))
        for a, iv in scan
    ]
    print(f"argmin a = {format_rational(best)} ({'certified' if certified else 'not certified'})", file=sys.stderr)
    if args.format == "json":
        out = _rows_json(header, rows, n=args.n, argmin=format_rational(best), certified=certified)
    else:
        out = _rows_csv(header, rows)
    return out, 0 if certified else 1


def cmd_verify(args) -> tuple[str, int]:
    results = analysis.verify_identities()
    ok = all(r[1] for r in results)
    if args.format == "json":
        out = json.dumps([{"identity": n, "ok": good, "message": msg} for n, good, msg in results], indent=2) + "\n"
    else:
        out = "".join(f"{msg if not good else 'OK'}  {name}\n" for name, good, msg in results)
    return out, 0 if ok else 1


COMMANDS = {
    "coeffs": cmd_coeffs,
    "bounds": cmd_bounds,
    "sweep": cmd_sweep,
    "rate": cmd_rate,
    "scan": cmd_scan,
    "verify-identities": cmd_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "precision", "n/a") is None:
            args.precision = _default_precision()
        if args.format is None:
            args.format = "json" if args.command == "bounds" else "csv"
        out, status = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
