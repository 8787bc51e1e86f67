"""Verification harness: exact proof identities, certified sweeps, convergence rates.

The symbolic checks rebuild the second derivatives of the telescoping
differences u(x), v(x) and the bound functions a(x), b(x) from scratch and
compare them with their closed forms as exact rational-function identities.
The numeric checks certify the double inequalities at many points and measure
how fast ln n! minus the approximation decays for various shifts a.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import Polynomial, RationalFunction, X, ratfun_second_derivative
from .interval import Interval, to_decimal_string
from .series import FormalSeries, stirling_series, trigamma_series
from .specfun import (
    CERTIFIED,
    DEFAULT_PRECISION,
    certify_margins,
    log_ratio,
    sevli_batir_margins,
    theorem2_margins,
)

HALF = Fraction(1, 2)


class IdentityMismatch(AssertionError):
    """An exact identity check failed."""


# ---------------------------------------------------------------------------
# symbolic functions: sum p_i(x) ln q_i(x) + r(x)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogTerm:
    """``coeff(x) * ln(arg(x))``."""

    coeff: Polynomial
    arg: Polynomial

    def second_derivative(self) -> RationalFunction:
        p, q = self.coeff, self.arg
        if p.degree > 1:
            raise ValueError("log term with a non-linear multiplier keeps a logarithm")
        dp, dq = p.derivative(), q.derivative()
        # (p ln q)'' = p'' ln q + 2 p' q'/q + p (q'' q - q'^2)/q^2, and p'' = 0 here
        return RationalFunction(2 * dp * dq, q) + RationalFunction(
            p * (dq.derivative() * q - dq * dq), q * q
        )

    def __call__(self, x: Fraction) -> float:
        return float(self.coeff(x)) * math.log(self.arg(x))


@dataclass(frozen=True)
class LogRationalFunction:
    log_terms: tuple[LogTerm, ...]
    rational: RationalFunction

    def second_derivative(self) -> RationalFunction:
        result = ratfun_second_derivative(self.rational)
        for term in self.log_terms:
            result = result + term.second_derivative()
        return result

    def __add__(self, other: RationalFunction) -> LogRationalFunction:
        return LogRationalFunction(self.log_terms, self.rational + other)

    def __call__(self, x) -> float:
        x = Fraction(x)
        return sum(t(x) for t in self.log_terms) + float(self.rational(x))


def _inv_power(base: Polynomial, k: int, c: Fraction | int = 1) -> RationalFunction:
    return RationalFunction(Polynomial([c]), base**k)


def build_u_v() -> tuple[LogRationalFunction, LogRationalFunction]:
    """u(x) = f(x+1) - f(x) and v(x) = g(x+1) - g(x) for the Theorem-2 functions f, g."""
    logs = (
        LogTerm(Polynomial([1]), X + 1),
        LogTerm(-(X + Fraction(3, 2)), X + 1),
        LogTerm(X + HALF, X),
    )
    rational = (
        RationalFunction(1)
        + _inv_power(X + HALF, 2, Fraction(1, 12))
        - _inv_power(X + 1, 3, Fraction(1, 240))
        + _inv_power(X, 3, Fraction(1, 240))
    )
    u = LogRationalFunction(logs, rational)
    v = u + (_inv_power(X + 1, 5, Fraction(11, 6720)) - _inv_power(X, 5, Fraction(11, 6720)))
    return u, v


# Closed forms as displayed alongside the proofs.
U_PP_NUMERATOR = Polynomial([1, 13, 74, 232, 391, 330, 110])
U_PP_DENOMINATOR = 20 * X**5 * (X + 1) ** 5 * (2 * X + 1) ** 4
Q_POLY = Polynomial([55, 825, 5499, 21325, 52589, 83867, 83881, 47936, 11984])
V_PP_DENOMINATOR = 1120 * X**7 * (X + 1) ** 7 * (2 * X + 1) ** 4
A_POLY = Polynomial([785, 3760, 6565, 5310, 1980, 264])
B_POLY = Polynomial([12547, 93268, 263179, 382830, 315336, 147504, 35952, 3424])


def _check_identity(name: str, computed: RationalFunction, numer: Polynomial, denom: Polynomial) -> bool:
    lhs = computed.numer * denom
    rhs = numer * computed.denom
    if lhs == rhs:
        return True
    # report in terms of the displayed denominator when it is a multiple of ours
    scale, rem = divmod(denom, computed.denom)
    ours = computed.numer * scale if rem.is_zero() else lhs
    theirs = numer if rem.is_zero() else rhs
    for k in range(max(ours.degree, theirs.degree) + 1):
        a = ours.coeffs[k] if k <= ours.degree else 0
        b = theirs.coeffs[k] if k <= theirs.degree else 0
        if a != b:
            raise IdentityMismatch(f"{name}: coefficient of x^{k} is {a}, expected {b}")
    raise IdentityMismatch(f"{name}: identity failed")  # pragma: no cover


def verify_u_pp() -> bool:
    u, _ = build_u_v()
    return _check_identity("u''", u.second_derivative(), U_PP_NUMERATOR, U_PP_DENOMINATOR)


def verify_v_pp() -> bool:
    _, v = build_u_v()
    return _check_identity("v''", v.second_derivative(), -Q_POLY, V_PP_DENOMINATOR)


def series_as_ratfun(s: FormalSeries, shift: Fraction | int = 0) -> RationalFunction:
    """The truncated sum of ``s`` at ``x + shift`` as an exact rational function."""
    base = X + shift
    result = RationalFunction(0)
    for k, c in s.nonzero().items():
        result = result + _inv_power(base, k, c)
    return result


def bound_functions() -> tuple[RationalFunction, RationalFunction]:
    """a(x), b(x): the upper bound of f and lower bound of g obtained from truncated series.

    ln Gamma(x+1) - (x+1/2)ln x + x - ln sqrt(2pi) lies between the Stirling
    sums through x^-5 (above) and x^-7 (below); psi'(x) lies between the
    trigamma sums through x^-5 (below) and x^-7 (above).
    """
    shifted = lambda order: series_as_ratfun(trigamma_series(order), HALF)
    a = (
        series_as_ratfun(stirling_series(5))
        - shifted(5) * Fraction(1, 12)
        - _inv_power(X, 3, Fraction(1, 240))
    )
    b = (
        series_as_ratfun(stirling_series(7))
        - shifted(7) * Fraction(1, 12)
        - _inv_power(X, 3, Fraction(1, 240))
        + _inv_power(X, 5, Fraction(11, 6720))
    )
    return a, b


def _single_bound(which: int) -> bool:
    a, b = bound_functions()
    if which == 0:
        return _check_identity("a(x)", a, -A_POLY.shift(-1), 5040 * X**5 * (2 * X + 1) ** 5)
    return _check_identity("b(x)", b, B_POLY.shift(-1), 20160 * X**7 * (2 * X + 1) ** 7)


def verify_a_b_bounds() -> bool:
    _single_bound(0)
    _single_bound(1)
    # positive coefficients: A(x-1), B(x-1) > 0 for x >= 1, hence a < 0 < b there
    if not all(c > 0 for c in A_POLY.coeffs + B_POLY.coeffs):
        raise IdentityMismatch("A or B has a non-positive coefficient")
    return True


def verify_identities() -> list[tuple[str, bool, str]]:
    """Run every identity; returns (name, ok, message) rows, one per displayed formula."""
    rows = []
    checks = [
        ("u''(x) closed form", verify_u_pp),
        ("v''(x) = -Q(x)/(1120 x^7 (x+1)^7 (2x+1)^4)", verify_v_pp),
        ("a(x) = -A(x-1)/(5040 x^5 (2x+1)^5)", lambda: _single_bound(0)),
        ("b(x) = B(x-1)/(20160 x^7 (2x+1)^7)", lambda: _single_bound(1)),
    ]
    for name, fn in checks:
        try:
            rows.append((name, fn(), "OK"))
        except IdentityMismatch as exc:
            rows.append((name, False, str(exc)))
    return rows


# ---------------------------------------------------------------------------
# certified sweeps
# ---------------------------------------------------------------------------

INEQUALITIES = {
    "theorem2": theorem2_margins,
    "sevli-batir": sevli_batir_margins,
}


def margin_digits(precision: int) -> int:
    return max(6, precision // 8)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class SweepPoint:
    """One certified point; margins are lower endpoints rounded toward -inf."""

    x: Fraction
    lower_margin: str
    upper_margin: str
    verdict: str


@dataclass
class SweepReport:
    points: list[SweepPoint]
    precision_used: int
    failures: int
    inequality: str = "theorem2"

    FIELDS = ("x", "lower_margin", "upper_margin", "verdict")

    def rows(self) -> list[dict[str, str]]:
        return [
            {
                "x": format_rational(p.x),
                "lower_margin": p.lower_margin,
                "upper_margin": p.upper_margin,
                "verdict": p.verdict,
            }
            for p in self.points
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=self.FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.rows())
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "inequality": self.inequality,
            "precision_used": self.precision_used,
            "failures": self.failures,
            "points": self.rows(),
        }
        return json.dumps(doc, indent=2) + "\n"


def _sweep_point(args: tuple[str, Fraction, int, int | None]) -> tuple[SweepPoint, int]:
    name, x, precision, cap = args
    res = certify_margins(INEQUALITIES[name], x, precision, cap)
    digits = margin_digits(precision)
    point = SweepPoint(
        x,
        to_decimal_string(res.lower.lo, digits, "floor"),
        to_decimal_string(res.upper.lo, digits, "floor"),
        res.verdict,
    )
    return point, res.precision


def sweep(
    x_values: Iterable[Fraction | int],
    precision: int = DEFAULT_PRECISION,
    inequality: str = "theorem2",
    max_precision: int | None = None,
    workers: int = 1,
) -> SweepReport:
    """Certify an inequality at every grid point; indeterminate points count as failures."""
    if inequality not in INEQUALITIES:
        raise ValueError(f"unknown inequality {inequality!r}")
    xs = sorted(Fraction(x) for x in x_values)
    if inequality == "theorem2" and xs and xs[0] < 1:
        raise ValueError("theorem2 sweeps need x >= 1")
    jobs = [(inequality, x, precision, max_precision) for x in xs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_point, jobs, chunksize=32))
    else:
        results = [_sweep_point(j) for j in jobs]
    points = [p for p, _ in results]
    used = max((prec for _, prec in results), default=precision)
    failures = sum(p.verdict != CERTIFIED for p in points)
    return SweepReport(points, used, failures, inequality)


def sweep_theorem2(x_values: Iterable[Fraction | int], precision: int = DEFAULT_PRECISION, **kw) -> SweepReport:
    return sweep(x_values, precision, "theorem2", **kw)


def sweep_sevli_batir(x_values: Iterable[Fraction | int], precision: int = DEFAULT_PRECISION, **kw) -> SweepReport:
    return sweep(x_values, precision, "sevli-batir", **kw)


# ---------------------------------------------------------------------------
# convergence rate of w_n(a) = ln n! - ln[(n/e)^n sqrt(2 pi n) exp(psi'(n+a)/12)]
# ---------------------------------------------------------------------------

LEMMA_ORIENTATION = "n^k (w_n - w_(n+1))"
REVERSED_ORIENTATION = "n^k (w_(n+1) - w_n)"


@dataclass
class RateReport:
    a: Fraction
    power: int
    samples: list[tuple[int, str]]
    fitted_exponent: str
    fitted_limit: str
    predicted_limit: str
    orientation: str
    indeterminate: list[int] = field(default_factory=list)

    def to_json(self) -> str:
        doc = asdict(self)
        doc["a"] = format_rational(self.a)
        doc["samples"] = [{"n": n, "scaled_w": s} for n, s in self.samples]
        return json.dumps(doc, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "scaled_w"])
        w.writerows(self.samples)
        return buf.getvalue()


def decay_power(a: Fraction) -> int:
    """|w_n| decays like n^-3 at a = 1/2 and like n^-2 for every other shift."""
    return 3 if Fraction(a) == HALF else 2


def rate_constant(a: Fraction) -> Fraction:
    """lim n^3 (w_(n+1) - w_n) = 1/12 - a/6."""
    return Fraction(1, 12) - Fraction(a) / 6


def _least_squares(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        return 0.0, my
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    return slope, my - slope * mx


def _mid_fraction(iv: Interval) -> Fraction:
    return (iv.lo_fraction() + iv.hi_fraction()) / 2


def convergence_rate(
    a: Fraction | int,
    n_grid: Sequence[int],
    precision: int = 256,
) -> RateReport:
    """Measure w_n(a) on ``n_grid`` and fit its decay.

    ``fitted_exponent`` is the least-squares slope of ln|w_n| against ln n
    over the top decade of the grid; ``fitted_limit`` is the intercept of a
    least-squares line of n^p w_n against 1/n over the same points.
    The orientation of the lemma lim n^k (w_n - w_(n+1)) = l  =>
    lim n^(k-1) w_n = l/(k-1) is decided by comparing both sign conventions
    with the measured scaled value at the largest n.
    """
    a = Fraction(a)
    grid = list(n_grid)
    if not grid or any(b <= c for c, b in zip(grid, grid[1:])):
        raise ValueError("n_grid must be non-empty and strictly increasing")
    power = decay_power(a)
    digits = max(12, precision // 8)

    samples: list[tuple[int, str]] = []
    values: dict[int, Fraction] = {}
    bad: list[int] = []
    for n in grid:
        w = log_ratio(n, a, precision)
        if w.lo <= 0 <= w.hi:
            bad.append(n)
            samples.append((n, "indeterminate"))
            continue
        scaled = _mid_fraction(w) * n**power
        values[n] = scaled
        samples.append((n, to_decimal_string(scaled, digits)))

    resolved = sorted(values)
    if not resolved:
        raise ArithmeticError("no grid point resolved; raise the precision")
    top = [n for n in resolved if n >= resolved[-1] / 10]
    log_n = [math.log(n) for n in top]
    log_w = [math.log(abs(float(values[n]))) - power * math.log(n) for n in top]
    exponent, _ = _least_squares(log_n, log_w)
    _, limit = _least_squares([1 / n for n in top], [float(values[n]) for n in top])

    # lemma constant from the measured one-step difference at the largest n
    n_big = resolved[-1]
    k = power + 1
    step = log_ratio(n_big, a, precision) - log_ratio(n_big + 1, a, precision)
    ell = float(_mid_fraction(step) * n_big**k)
    predictions = {
        LEMMA_ORIENTATION: ell / (k - 1),
        REVERSED_ORIENTATION: -ell / (k - 1),
    }
    measured = float(values[n_big])
    orientation = min(predictions, key=lambda o: abs(predictions[o] - measured))
    if power == 2:
        theory = -float(rate_constant(a)) / (k - 1)
        if orientation == REVERSED_ORIENTATION:
            theory = -theory
    else:
        theory = 1 / 240
    return RateReport(
        a=a,
        power=power,
        samples=samples,
        fitted_exponent=f"{exponent:.6f}",
        fitted_limit=f"{limit:.10e}",
        predicted_limit=f"{theory:.10e}",
        orientation=orientation,
        indeterminate=bad,
    )


def optimality_scan(
    a_values: Sequence[Fraction | int],
    n: int,
    precision: int = 256,
) -> list[tuple[Fraction, Interval]]:
    """Enclosures of |w_n(a)| for each shift a, in input order."""
    if n < 1:
        raise ValueError("n must be positive")
    return [(Fraction(a), log_ratio(n, a, precision).abs()) for a in a_values]


def scan_argmin(scan: Sequence[tuple[Fraction, Interval]]) -> tuple[Fraction, bool]:
    """Grid point with the smallest |w_n|, and whether that minimum is certified.

    Certified means the winner's upper endpoint is below every other lower endpoint.
    """
    best_a, best = min(scan, key=lambda item: item[1].hi)
    certified = all(best.hi < iv.lo for a, iv in scan if a != best_a)
    return best_a, certified
