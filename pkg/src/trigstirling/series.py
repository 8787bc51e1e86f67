"""Truncated asymptotic series in 1/x with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Union

from .exactnum import bernoulli

__all__ = [
    "FormalSeries",
    "TruncationError",
    "stirling_series",
    "trigamma_series",
    "reexpand_shift",
    "h_series",
    "neg_binomial",
    "REFERENCE_H_ORDER",
]

# Highest exponent of the h(x) expansion that has a published reference value.
REFERENCE_H_ORDER = 9


class TruncationError(IndexError):
    """A coefficient beyond the series' truncation order was requested."""


class FormalSeries:
    """``sum_{k=1}^{order} c_k x^(-k) + O(x^(-order-1))``.

    Only nonzero coefficients are stored; reading an exponent above ``order``
    raises :class:`TruncationError` instead of returning zero.
    """

    __slots__ = ("_coeffs", "order")

    def __init__(self, coeffs: Mapping[int, Union[int, Fraction]], order: int):
        if order < 1:
            raise ValueError("truncation order must be >= 1")
        cleaned: dict[int, Fraction] = {}
        for k, c in coeffs.items():
            if not 1 <= k <= order:
                raise ValueError(f"exponent {k} outside 1..{order}")
            c = Fraction(c)
            if c != 0:
                cleaned[k] = c
        self._coeffs = cleaned
        self.order = order

    def __getitem__(self, k: int) -> Fraction:
        if k > self.order:
            raise TruncationError(f"x^-{k} is beyond truncation order {self.order}")
        if k < 1:
            raise KeyError(k)
        return self._coeffs.get(k, Fraction(0))

    def items(self) -> list[tuple[int, Fraction]]:
        """All (exponent, coefficient) pairs 1..order, zeros included."""
        return [(k, self[k]) for k in range(1, self.order + 1)]

    def nonzero(self) -> dict[int, Fraction]:
        return dict(sorted(self._coeffs.items()))

    def truncate(self, order: int) -> FormalSeries:
        if order > self.order:
            raise TruncationError(f"cannot extend order {self.order} to {order}")
        return FormalSeries({k: c for k, c in self._coeffs.items() if k <= order}, order)

    def __add__(self, other: FormalSeries) -> FormalSeries:
        order = min(self.order, other.order)
        out = {k: self[k] + other[k] for k in range(1, order + 1)}
        return FormalSeries(out, order)

    def __neg__(self) -> FormalSeries:
        return FormalSeries({k: -c for k, c in self._coeffs.items()}, self.order)

    def __sub__(self, other: FormalSeries) -> FormalSeries:
        return self + (-other)

    def scale(self, c: Union[int, Fraction]) -> FormalSeries:
        return FormalSeries({k: c * v for k, v in self._coeffs.items()}, self.order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self.order == other.order and self._coeffs == other._coeffs

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {c}" for k, c in sorted(self._coeffs.items()))
        return f"FormalSeries({{{body}}}, order={self.order})"

    def __call__(self, x: Union[int, Fraction]) -> Fraction:
        """Exact value of the truncated sum at a rational point."""
        inv = 1 / Fraction(x)
        return sum((c * inv**k for k, c in self._coeffs.items()), Fraction(0))


def stirling_series(order: int) -> FormalSeries:
    """ln Gamma(x+1) - (x+1/2) ln x + x - ln sqrt(2 pi), through x^-order."""
    if order < 1:
        raise ValueError("order must be >= 1")
    coeffs = {}
    m = 1
    while 2 * m - 1 <= order:
        coeffs[2 * m - 1] = bernoulli(2 * m) / (2 * m * (2 * m - 1))
        m += 1
    return FormalSeries(coeffs, order)


def trigamma_series(order: int) -> FormalSeries:
    """psi'(x) ~ 1/x + 1/(2x^2) + sum B_2m / x^(2m+1)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    coeffs: dict[int, Fraction] = {1: Fraction(1)}
    if order >= 2:
        coeffs[2] = Fraction(1, 2)
    m = 1
    while 2 * m + 1 <= order:
        coeffs[2 * m + 1] = bernoulli(2 * m)
        m += 1
    return FormalSeries(coeffs, order)


def neg_binomial(k: int, i: int) -> Fraction:
    """C(-k, i) = (1/i!) prod_{l=0}^{i-1} (-k - l)."""
    num = 1
    den = 1
    for ell in range(i):
        num *= -k - ell
        den *= ell + 1
    return Fraction(num, den)


def reexpand_shift(s: FormalSeries, shift: Union[int, Fraction], order: int) -> FormalSeries:
    """Rewrite ``sum a_k (x+shift)^-k`` as a series in powers of 1/x.

    ``(x+c)^-k = x^-k (1 + c/x)^-k = sum_i C(-k, i) c^i x^-(k+i)``, so the
    result through x^-order needs every a_k with k <= order.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if order > s.order:
        raise TruncationError(
            f"re-expansion to order {order} needs input order >= {order}, got {s.order}"
        )
    c = Fraction(shift)
    out: dict[int, Fraction] = {}
    for k in range(1, order + 1):
        a = s[k]
        if a == 0:
            continue
        for i in range(order - k + 1):
            out[k + i] = out.get(k + i, Fraction(0)) + a * neg_binomial(k, i) * c**i
    return FormalSeries(out, order)


def h_series(order: int = REFERENCE_H_ORDER) -> FormalSeries:
    """Expansion of h(x) = [ln Gamma(x+1) - (x+1/2) ln x + x - ln sqrt(2 pi)] - psi'(x+1/2)/12.

    Coefficients above x^-9 have no published reference value.
    """
    if order < 3:
        raise ValueError("order must be >= 3")
    shifted = reexpand_shift(trigamma_series(order).scale(Fraction(1, 12)), Fraction(1, 2), order)
    h = stirling_series(order) - shifted
    if h[1] != 0 or h[2] != 0:
        raise ArithmeticError("leading terms of h(x) failed to cancel")
    return h
