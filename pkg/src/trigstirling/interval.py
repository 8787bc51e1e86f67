"""Outward-rounded interval arithmetic on MPFR floats (via gmpy2).

Each endpoint is computed with its own directed rounding: lower endpoints
toward -inf, upper endpoints toward +inf.  MPFR's elementary functions are
correctly rounded, so ``log``/``exp`` evaluated at the endpoints in the
matching direction yield rigorous enclosures of monotone functions.
"""

from __future__ import annotations

from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction
from functools import lru_cache
from typing import Union

import gmpy2
from gmpy2 import mpfr, mpq

__all__ = ["Interval", "Exact", "to_decimal_string"]

Exact = Union[int, Fraction]


@lru_cache(maxsize=None)
def _ctx(prec: int, up: bool):
    return gmpy2.context(precision=prec, round=gmpy2.RoundUp if up else gmpy2.RoundDown)


def _mpq(q: Exact) -> mpq:
    if isinstance(q, Fraction):
        return mpq(q.numerator, q.denominator)
    return mpq(q)


class Interval:
    """Closed interval [lo, hi] of reals carried at ``prec`` bits."""

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo, hi=None, prec: int = 128):
        if prec < 2:
            raise ValueError("precision must be at least 2 bits")
        if hi is None:
            hi = lo
        d, u = _ctx(prec, False), _ctx(prec, True)
        lo = mpfr(_mpq(lo), context=d) if isinstance(lo, (int, Fraction)) else mpfr(lo, context=d)
        hi = mpfr(_mpq(hi), context=u) if isinstance(hi, (int, Fraction)) else mpfr(hi, context=u)
        if gmpy2.is_nan(lo) or gmpy2.is_nan(hi):
            raise ValueError("NaN endpoint")
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi
        self.prec = prec

    @classmethod
    def exact(cls, q: Exact, prec: int) -> Interval:
        """Tightest enclosure of a rational number."""
        return cls(q, q, prec)

    @classmethod
    def pi(cls, prec: int) -> Interval:
        return cls(_ctx(prec, False).const_pi(), _ctx(prec, True).const_pi(), prec)

    # -- coercion --------------------------------------------------------

    def _coerce(self, other) -> Interval | None:
        if isinstance(other, Interval):
            return other
        if isinstance(other, (int, Fraction)):
            return Interval.exact(other, self.prec)
        return None

    def _pair(self, other) -> tuple[int, object, object]:
        p = max(self.prec, other.prec)
        return p, _ctx(p, False), _ctx(p, True)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other) -> Interval:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p, d, u = self._pair(o)
        return Interval(d.add(self.lo, o.lo), u.add(self.hi, o.hi), p)

    __radd__ = __add__

    def __neg__(self) -> Interval:
        return Interval(-self.hi, -self.lo, self.prec)

    def __sub__(self, other) -> Interval:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p, d, u = self._pair(o)
        return Interval(d.sub(self.lo, o.hi), u.sub(self.hi, o.lo), p)

    def __rsub__(self, other) -> Interval:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other) -> Interval:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p, d, u = self._pair(o)
        ends = [(a, b) for a in (self.lo, self.hi) for b in (o.lo, o.hi)]
        return Interval(min(d.mul(a, b) for a, b in ends), max(u.mul(a, b) for a, b in ends), p)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Interval:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval divisor contains zero")
        p, d, u = self._pair(o)
        ends = [(a, b) for a in (self.lo, self.hi) for b in (o.lo, o.hi)]
        return Interval(min(d.div(a, b) for a, b in ends), max(u.div(a, b) for a, b in ends), p)

    def __rtruediv__(self, other) -> Interval:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int) -> Interval:
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        if n == 0:
            return Interval.exact(1, self.prec)
        d, u = _ctx(self.prec, False), _ctx(self.prec, True)
        if self.lo >= 0:
            return Interval(d.pow(self.lo, n), u.pow(self.hi, n), self.prec)
        if self.hi <= 0:
            r = Interval(d.pow(-self.hi, n), u.pow(-self.lo, n), self.prec)
            return r if n % 2 == 0 else -r
        if n % 2 == 1:
            return Interval(d.pow(self.lo, n), u.pow(self.hi, n), self.prec)
        m = max(-self.lo, self.hi)
        return Interval(0, u.pow(m, n), self.prec)

    # -- elementary functions --------------------------------------------

    def log(self) -> Interval:
        if self.lo <= 0:
            raise ValueError("log of an interval that is not strictly positive")
        d, u = _ctx(self.prec, False), _ctx(self.prec, True)
        return Interval(d.log(self.lo), u.log(self.hi), self.prec)

    def exp(self) -> Interval:
        d, u = _ctx(self.prec, False), _ctx(self.prec, True)
        return Interval(d.exp(self.lo), u.exp(self.hi), self.prec)

    def abs(self) -> Interval:
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0, max(-self.lo, self.hi), self.prec)

    def hull(self, other: Interval) -> Interval:
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi), max(self.prec, other.prec))

    def with_error(self, radius) -> Interval:
        """Widen by ``[-radius, radius]`` where radius is an upper bound >= 0."""
        r = radius.hi if isinstance(radius, Interval) else mpfr(_mpq(radius), context=_ctx(self.prec, True))
        d, u = _ctx(self.prec, False), _ctx(self.prec, True)
        return Interval(d.sub(self.lo, r), u.add(self.hi, r), self.prec)

    # -- queries ---------------------------------------------------------

    def width(self) -> mpfr:
        return _ctx(self.prec, True).sub(self.hi, self.lo)

    def mid(self) -> mpfr:
        return _ctx(self.prec + 1, False).div_2exp(_ctx(self.prec + 1, False).add(self.lo, self.hi), 1)

    def contains(self, value) -> bool:
        if isinstance(value, Interval):
            return self.lo <= value.lo and value.hi <= self.hi
        if isinstance(value, (int, Fraction)):
            q = _mpq(value)
            return mpq(self.lo) <= q <= mpq(self.hi)
        return self.lo <= value <= self.hi

    __contains__ = contains

    def overlaps(self, other: Interval) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    def lo_fraction(self) -> Fraction:
        n, d = self.lo.as_integer_ratio()
        return Fraction(int(n), int(d))

    def hi_fraction(self) -> Fraction:
        n, d = self.hi.as_integer_ratio()
        return Fraction(int(n), int(d))

    def __repr__(self) -> str:
        return f"Interval([{self.lo}, {self.hi}], prec={self.prec})"


def to_decimal_string(value, digits: int, rounding: str = "nearest") -> str:
    """Render an mpfr (or Fraction) with ``digits`` significant digits.

    ``rounding`` is "floor", "ceiling" or "nearest"; the conversion goes
    through the exact binary value so the result is deterministic.
    """
    if isinstance(value, Fraction):
        num, den = int(value.numerator), int(value.denominator)
    else:
        num, den = (int(t) for t in value.as_integer_ratio())
    mode = {"floor": ROUND_FLOOR, "ceiling": ROUND_CEILING}.get(rounding)
    ctx = Context(prec=digits, rounding=mode) if mode else Context(prec=digits)
    d = ctx.divide(Decimal(num), Decimal(den))
    if d == 0:
        return "0"
    return f"{d:.{digits - 1}e}"
