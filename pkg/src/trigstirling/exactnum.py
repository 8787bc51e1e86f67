"""Exact rational arithmetic: polynomials, rational functions, Bernoulli numbers.

Rationals are :class:`fractions.Fraction`, which is always stored in lowest
terms with a positive denominator.  Polynomials are dense coefficient tuples
(index = degree); rational functions are kept reduced with a monic
denominator, so two equal rational functions also compare equal structurally.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb
from typing import Iterable, Union

__all__ = [
    "Rational",
    "Polynomial",
    "RationalFunction",
    "X",
    "bernoulli",
    "ratfun_second_derivative",
    "ratfun_equal",
]

Rational = Fraction
Scalar = Union[int, Fraction]


def _as_fraction(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"exact coefficient required, got {type(c).__name__}")


class Polynomial:
    """Dense univariate polynomial with rational coefficients.

    ``Polynomial([c0, c1, c2])`` is ``c0 + c1*x + c2*x**2``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c: Scalar) -> Polynomial:
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c: Scalar = 1) -> Polynomial:
        return cls([0] * degree + [c])

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial([other])
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(f"{c}")
            elif k == 1:
                parts.append(f"{c}*x")
            else:
                parts.append(f"{c}*x^{k}")
        return " + ".join(parts)

    @staticmethod
    def _coerce(other: object) -> Polynomial | None:
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial([other])
        return None

    def __add__(self, other: object) -> Polynomial:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other: object) -> Polynomial:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> Polynomial:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> Polynomial:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.leading
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lead
            if c == 0:
                continue
            quot[k - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[0]

    def __mod__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[1]

    def monic(self) -> Polynomial:
        if self.is_zero():
            return self
        lead = self.leading
        return Polynomial(c / lead for c in self.coeffs)

    def derivative(self) -> Polynomial:
        return Polynomial(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def compose(self, inner: Polynomial) -> Polynomial:
        """Return ``self(inner(x))``."""
        acc = Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def shift(self, c: Scalar) -> Polynomial:
        """Return ``self(x + c)``."""
        return self.compose(Polynomial([c, 1]))


X = Polynomial([0, 1])


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd by the Euclidean algorithm (gcd(0, 0) = 0)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


class RationalFunction:
    """Quotient of two polynomials, reduced, with a monic denominator."""

    __slots__ = ("numer", "denom")

    def __init__(self, numer: Polynomial | Scalar, denom: Polynomial | Scalar = 1):
        n = numer if isinstance(numer, Polynomial) else Polynomial([numer])
        d = denom if isinstance(denom, Polynomial) else Polynomial([denom])
        if d.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if n.is_zero():
            n, d = Polynomial(), Polynomial([1])
        else:
            g = poly_gcd(n, d)
            if g.degree > 0:
                n, d = n // g, d // g
            lead = d.leading
            n = Polynomial(c / lead for c in n.coeffs)
            d = Polynomial(c / lead for c in d.coeffs)
        self.numer = n
        self.denom = d

    @staticmethod
    def _coerce(other: object) -> RationalFunction | None:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (Polynomial, int, Fraction)):
            return RationalFunction(other)
        return None

    def __add__(self, other: object) -> RationalFunction:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(
            self.numer * o.denom + o.numer * self.denom, self.denom * o.denom
        )

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.numer, self.denom)

    def __sub__(self, other: object) -> RationalFunction:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> RationalFunction:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> RationalFunction:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.numer * o.numer, self.denom * o.denom)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> RationalFunction:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.numer.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.numer * o.denom, self.denom * o.numer)

    def __rtruediv__(self, other: object) -> RationalFunction:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int) -> RationalFunction:
        if n < 0:
            return RationalFunction(self.denom ** (-n), self.numer ** (-n))
        return RationalFunction(self.numer**n, self.denom**n)

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ratfun_equal(self, o)

    def __hash__(self) -> int:
        return hash((self.numer, self.denom))

    def __call__(self, x: Scalar) -> Fraction:
        d = self.denom(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at x = {x}")
        return self.numer(x) / d

    def __repr__(self) -> str:
        return f"RationalFunction(({self.numer}) / ({self.denom}))"

    def derivative(self) -> RationalFunction:
        n, d = self.numer, self.denom
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)


def ratfun_second_derivative(f: RationalFunction) -> RationalFunction:
    """Exact second derivative, reduced."""
    return f.derivative().derivative()


def ratfun_equal(f: RationalFunction, g: RationalFunction) -> bool:
    """Identity test by cross-multiplication: f.n * g.d == g.n * f.d."""
    return f.numer * g.denom == g.numer * f.denom


# Bernoulli numbers, B_1 = -1/2 (generating function z/(e^z - 1)).
_bernoulli_cache: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli(k: int) -> Fraction:
    """Return B_k with the convention B_1 = -1/2.

    Values are produced from ``sum_{j=0}^{k} C(k+1, j) B_j = 0`` and cached.
    """
    if k < 0:
        raise ValueError("bernoulli index must be non-negative")
    cache = _bernoulli_cache
    if k < len(cache):
        return cache[k]
    with _bernoulli_lock:
        while len(cache) <= k:
            m = len(cache)
            if m > 1 and m % 2 == 1:
                cache.append(Fraction(0))
                continue
            s = sum((comb(m + 1, j) * cache[j] for j in range(m)), Fraction(0))
            cache.append(-s / (m + 1))
        return cache[k]
