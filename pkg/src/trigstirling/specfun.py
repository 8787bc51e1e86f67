"""Certified enclosures of psi', ln Gamma and the trigamma-corrected Stirling family.

Everything here returns :class:`~trigstirling.interval.Interval` values that
are guaranteed to contain the true real result.  Arguments are pushed above
``max(10, precision/4)`` with the recurrences

    psi'(x) = psi'(x+1) + 1/x**2,        Gamma(x+1) = Gamma(x+n+1) / prod_{k=1..n} (x+k),

and the asymptotic expansions are then truncated once the first omitted
term drops below the working precision.  For x > 0 both the Stirling and the
trigamma remainders have the sign of the first omitted term and are smaller
in magnitude, which is what makes the truncation rigorous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

from .exactnum import bernoulli
from .interval import Exact, Interval

__all__ = [
    "GUARD_BITS",
    "ApproxParams",
    "MarginResult",
    "trigamma",
    "trigamma_direct_sum",
    "lngamma",
    "stirling_correction",
    "approx_ln",
    "theorem2_margins",
    "sevli_batir_margins",
    "certify_margins",
    "shift_threshold",
]

GUARD_BITS = 32
DEFAULT_PRECISION = 128

HALF = Fraction(1, 2)


def _as_exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"exact rational argument required, got {type(x).__name__}")


def shift_threshold(precision: int) -> int:
    return max(10, -(-precision // 4))


@lru_cache(maxsize=64)
def half_log_2pi(prec: int) -> Interval:
    return (Interval.pi(prec) * 2).log() * HALF


# ---------------------------------------------------------------------------
# trigamma
# ---------------------------------------------------------------------------


def _trigamma_asymptotic(y: Interval, wp: int) -> Interval:
    # 1/y + 1/(2y^2) + sum_{m>=1} B_2m / y^(2m+1); y >= shift threshold
    inv = 1 / y
    inv2 = inv * inv
    total = inv + inv2 * HALF
    power = inv2 * inv
    tol = Fraction(1, 2 ** (wp + 2)) * inv.lo_fraction()
    prev_bound = None
    m = 1
    while True:
        total = total + power * bernoulli(2 * m)
        power = power * inv2
        bound = abs(bernoulli(2 * m + 2)) * power.hi_fraction()
        if bound < tol or (prev_bound is not None and bound >= prev_bound):
            return total.with_error(bound)
        prev_bound = bound
        m += 1


def trigamma(x: Union[Exact, Interval], precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of psi'(x) for x > 0 (rational or interval argument)."""
    wp = precision + GUARD_BITS
    if isinstance(x, Interval):
        if x.lo <= 0:
            raise ValueError("trigamma requires x > 0")
        y = Interval(x.lo, x.hi, wp)
        start = x.lo_fraction()
    else:
        xq = _as_exact(x)
        if xq <= 0:
            raise ValueError("trigamma requires x > 0")
        y = Interval.exact(xq, wp)
        start = xq
    shifts = max(0, math.ceil(shift_threshold(precision) - start))
    acc = Interval.exact(0, wp)
    for _ in range(shifts):
        acc = acc + 1 / (y * y)
        y = y + 1
    return acc + _trigamma_asymptotic(y, wp)


def trigamma_direct_sum(
    x: Exact,
    precision: int = DEFAULT_PRECISION,
    terms: int | None = None,
    tail: str = "factorial",
) -> Interval:
    """Oracle for psi'(x) = sum_{k>=0} 1/(x+k)**2 without Bernoulli numbers.

    The first ``terms`` summands are added directly.  The tail psi'(x+N) is
    enclosed either by the integral bounds ``1/(x+N) <= tail <= 1/(x+N-1)``
    (``tail="integral"``, crude) or by the convergent inverse-factorial series
    ``sum_{j>=1} (j-1)! / (j (z)_j)`` whose remainder after K terms is at most
    ``K! / ((K+1) (z-1) (z)_K)`` (``tail="factorial"``).
    """
    xq = _as_exact(x)
    if xq <= 0:
        raise ValueError("trigamma requires x > 0")
    wp = precision + GUARD_BITS
    if terms is None:
        terms = max(0, math.ceil(max(16, precision // 2) - xq))
    if tail == "integral" and terms < 1:
        terms = 1
    acc = Interval.exact(0, wp)
    for k in range(terms):
        z = Interval.exact(xq + k, wp)
        acc = acc + 1 / (z * z)
    zq = xq + terms
    if tail == "integral":
        lower = Interval.exact(1, wp) / Interval.exact(zq, wp)
        upper = Interval.exact(1, wp) / Interval.exact(zq - 1, wp)
        return acc + Interval(lower.lo, upper.hi, wp)
    if tail != "factorial":
        raise ValueError(f"unknown tail method {tail!r}")
    if zq <= 1:
        raise ValueError("factorial tail needs x + terms > 1")
    z = Interval.exact(zq, wp)
    ratio = Interval.exact(1, wp) / z  # (j-1)! / (z)_j at j = 1
    series = Interval.exact(0, wp)
    tol = Fraction(1, 2 ** (wp + 2)) / zq
    j = 1
    while True:
        series = series + ratio / j
        # remainder after j terms: j! / ((j+1)(z-1)(z)_j) = ratio * j / ((j+1)(z-1))
        bound = (ratio * j / ((j + 1) * (zq - 1))).hi_fraction()
        if bound < tol:
            break
        ratio = ratio * j / (z + j)
        j += 1
    return acc + series + Interval(0, bound, wp)


# ---------------------------------------------------------------------------
# ln Gamma
# ---------------------------------------------------------------------------


def _stirling_tail(y: Fraction, wp: int) -> Interval:
    # sum_{m>=1} B_2m / (2m(2m-1) y^(2m-1)), remainder between 0 and next term
    inv = Interval.exact(1 / y, wp)
    inv2 = inv * inv
    power = inv
    total = Interval.exact(0, wp)
    tol = Fraction(1, 2 ** (wp + 2)) / y
    prev = None
    m = 1
    while True:
        total = total + power * (bernoulli(2 * m) / (2 * m * (2 * m - 1)))
        power = power * inv2
        nxt = power * (bernoulli(2 * m + 2) / ((2 * m + 2) * (2 * m + 1)))
        size = nxt.abs().hi_fraction()
        if size < tol or (prev is not None and size >= prev):
            return total + nxt.hull(Interval.exact(0, wp))
        prev = size
        m += 1


def stirling_correction(x: Exact, precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of ln Gamma(x+1) - (x+1/2) ln x + x - ln sqrt(2 pi).

    For large x this is just the Stirling tail, so it carries no cancellation
    from the O(x ln x) leading part.
    """
    xq = _as_exact(x)
    if xq <= 0:
        raise ValueError("ln Gamma(x+1) is only supported for x > 0")
    wp = precision + GUARD_BITS
    shifts = max(0, math.ceil(shift_threshold(precision) - xq))
    tail = _stirling_tail(xq + shifts, wp)
    if shifts == 0:
        return tail
    y = xq + shifts
    prod = Fraction(1)
    for k in range(1, shifts + 1):
        prod *= xq + k
    # ln G(x+1) = ln G(y+1) - ln prod; re-express the leading part at y against x
    lead_y = Interval.exact(y + HALF, wp) * Interval.exact(y, wp).log() - y
    lead_x = Interval.exact(xq + HALF, wp) * Interval.exact(xq, wp).log() - xq
    return tail + lead_y - Interval.exact(prod, wp).log() - lead_x


def lngamma(x: Exact, precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of ln Gamma(x+1) = ln x! for rational x > 0."""
    xq = _as_exact(x)
    if xq <= 0:
        raise ValueError("ln Gamma(x+1) is only supported for x > 0")
    wp = precision + GUARD_BITS
    shifts = max(0, math.ceil(shift_threshold(precision) - xq))
    y = xq + shifts
    value = _stirling_tail(y, wp) + _leading(y, wp)
    if shifts:
        prod = Fraction(1)
        for k in range(1, shifts + 1):
            prod *= xq + k
        value = value - Interval.exact(prod, wp).log()
    return value


def _leading(x: Fraction, wp: int) -> Interval:
    # (x+1/2) ln x - x + ln sqrt(2 pi)
    return Interval.exact(x + HALF, wp) * Interval.exact(x, wp).log() - x + half_log_2pi(wp)


# ---------------------------------------------------------------------------
# the approximation family n! ~ (n/e)^n sqrt(2 pi n) exp(psi'(n+a)/12)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ApproxParams:
    """Point ``x`` and shift ``a`` of the trigamma-corrected approximation."""

    x: Fraction
    a: Fraction = HALF

    def __post_init__(self):
        object.__setattr__(self, "x", _as_exact(self.x))
        object.__setattr__(self, "a", _as_exact(self.a))
        if self.x <= 0:
            raise ValueError("x must be positive")
        if self.x + self.a <= 0:
            raise ValueError("x + a must be positive for psi'(x+a)")


def approx_ln(params: ApproxParams, precision: int = DEFAULT_PRECISION) -> Interval:
    """ln of (x^x/e^x) sqrt(2 pi x) exp(psi'(x+a)/12)."""
    wp = precision + GUARD_BITS
    return _leading(params.x, wp) + trigamma(params.x + params.a, precision) / 12


def log_ratio(x: Exact, a: Exact, precision: int = DEFAULT_PRECISION) -> Interval:
    """w(x) = ln Gamma(x+1) - approx_ln(x, a), computed without the big leading terms."""
    p = ApproxParams(x, a)
    return stirling_correction(p.x, precision) - trigamma(p.x + p.a, precision) / 12


def theorem2_margins(x: Exact, precision: int = DEFAULT_PRECISION) -> tuple[Interval, Interval]:
    """Margins of exp(1/(240x^3) - 11/(6720x^5)) < e^x Gamma(x+1) / (...) < exp(1/(240x^3)).

    Returns ``(w - 1/(240x^3) + 11/(6720x^5), 1/(240x^3) - w)`` with
    ``w = log_ratio(x, 1/2)``; the double inequality holds at x when both
    enclosures are strictly positive.
    """
    xq = _as_exact(x)
    if xq < 1:
        raise ValueError("the double inequality is checked for x >= 1")
    w = log_ratio(xq, HALF, precision)
    top = Fraction(1, 240) / xq**3
    bottom = top - Fraction(11, 6720) / xq**5
    return w - bottom, top - w


def sevli_batir_margins(x: Exact, precision: int = DEFAULT_PRECISION) -> tuple[Interval, Interval]:
    """Margins of the bounds with psi'(x+1/2) (below) and psi'(x) (above) around Gamma(x+1)."""
    xq = _as_exact(x)
    if xq <= 0:
        raise ValueError("x must be positive")
    c = stirling_correction(xq, precision)
    lower = c - trigamma(xq + HALF, precision) / 12
    upper = trigamma(xq, precision) / 12 - c
    return lower, upper


# ---------------------------------------------------------------------------
# sign certification with precision escalation
# ---------------------------------------------------------------------------

CERTIFIED = "certified"
INDETERMINATE = "indeterminate"
VIOLATED = "violated"


@dataclass(frozen=True)
class MarginResult:
    x: Fraction
    lower: Interval
    upper: Interval
    precision: int
    verdict: str


MarginFn = Callable[[Fraction, int], "tuple[Interval, Interval]"]


def certify_margins(
    margins: MarginFn,
    x: Exact,
    precision: int = DEFAULT_PRECISION,
    max_precision: int | None = None,
) -> MarginResult:
    """Evaluate ``margins(x, precision)`` and escalate precision while a sign is unresolved.

    A margin whose enclosure lies entirely below zero is a genuine violation;
    one that straddles zero only means the precision was too low, so it is
    retried at twice the precision up to ``max_precision`` and then reported
    as indeterminate.
    """
    xq = _as_exact(x)
    cap = max_precision if max_precision is not None else max(precision, 1024)
    prec = precision
    while True:
        lower, upper = margins(xq, prec)
        if lower.is_negative() or upper.is_negative():
            return MarginResult(xq, lower, upper, prec, VIOLATED)
        if lower.is_positive() and upper.is_positive():
            return MarginResult(xq, lower, upper, prec, CERTIFIED)
        if prec >= cap:
            return MarginResult(xq, lower, upper, prec, INDETERMINATE)
        prec = min(2 * prec, cap)
