from fractions import Fraction
from math import comb, factorial

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from trigstirling.exactnum import (
    Polynomial,
    RationalFunction,
    X,
    bernoulli,
    ratfun_equal,
    ratfun_second_derivative,
)


def akiyama_tanigawa(n):
    """Independent Bernoulli oracle (yields B_1 = +1/2, flipped below)."""
    a = [Fraction(0)] * (n + 1)
    out = []
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    out[1] = -out[1]
    return out


@pytest.mark.parametrize("k, expected", [(0, Fraction(1)), (1, Fraction(-1, 2)), (2, Fraction(1, 6)), (7, Fraction(0))])
def test_bernoulli_examples(k, expected):
    assert bernoulli(k) == expected


def test_bernoulli_matches_akiyama_tanigawa():
    oracle = akiyama_tanigawa(40)
    assert [bernoulli(k) for k in range(41)] == oracle


def test_bernoulli_recurrence_identity():
    for k in range(1, 51):
        assert sum(comb(k + 1, j) * bernoulli(j) for j in range(k + 1)) == 0


def test_bernoulli_generating_function_product():
    K = 20
    # (e^z - 1)/z = sum z^j / (j+1)!
    b = [bernoulli(k) / factorial(k) for k in range(K + 1)]
    e = [Fraction(1, factorial(j + 1)) for j in range(K + 1)]
    prod = [sum(b[i] * e[n - i] for i in range(n + 1)) for n in range(K + 1)]
    assert prod[0] == 1
    assert all(c == 0 for c in prod[1:])


def test_bernoulli_rejects_negative():
    with pytest.raises(ValueError):
        bernoulli(-1)


def test_polynomial_trims_and_evaluates():
    p = Polynomial([1, 2, 0, 0])
    assert p.degree == 1
    assert p(Fraction(3, 2)) == 4
    assert Polynomial().degree == -1
    assert Polynomial([0, 0]).is_zero()


def test_polynomial_divmod():
    p = (X + 1) * (X - 2) + 5
    q, r = divmod(p, X + 1)
    assert q == X - 2
    assert r == Polynomial([5])


def test_polynomial_shift():
    A = Polynomial([785, 3760, 6565, 5310, 1980, 264])
    assert A.shift(-1)(1) == 785
    assert A.shift(-1)(Fraction(7, 3)) == A(Fraction(4, 3))


@pytest.mark.parametrize(
    "f, expected",
    [
        (RationalFunction(1, X), RationalFunction(2, X**3)),
        (RationalFunction(X**2), RationalFunction(2)),
        (RationalFunction(1, X + 1), RationalFunction(2, (X + 1) ** 3)),
    ],
)
def test_second_derivative_examples(f, expected):
    assert ratfun_equal(ratfun_second_derivative(f), expected)


def test_ratfun_equal_examples():
    assert ratfun_equal(RationalFunction(X**2 - 1, X - 1), RationalFunction(X + 1))
    assert not ratfun_equal(RationalFunction(1, X), RationalFunction(1, X + 1))
    assert ratfun_equal(RationalFunction(2 * X, 2 * X**2), RationalFunction(1, X))


def test_ratfun_canonical_form():
    f = RationalFunction(2 * X + 2, 4 * X**2 - 4)
    assert f.denom.leading == 1
    assert f.denom == X - 1
    assert f.numer == Polynomial([Fraction(1, 2)])


def test_zero_denominator_rejected():
    with pytest.raises(ZeroDivisionError):
        RationalFunction(X, Polynomial())


small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
polys = st.lists(small, min_size=0, max_size=4).map(Polynomial)
nonzero_polys = polys.filter(lambda p: not p.is_zero())
ratfuns = st.builds(RationalFunction, polys, nonzero_polys)


@given(polys, polys, polys)
def test_polynomial_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a - a).is_zero()
    assert a + 0 == a and a * 1 == a


@settings(max_examples=40, deadline=None)
@given(ratfuns, ratfuns, ratfuns)
def test_ratfun_field_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f * (g + h) == f * g + f * h
    assert (f - f) == RationalFunction(0)
    if not f.numer.is_zero():
        assert f / f == RationalFunction(1)


@settings(max_examples=30, deadline=None)
@given(ratfuns, ratfuns, small)
def test_second_derivative_linear_and_product_rule(f, g, c):
    d2 = ratfun_second_derivative
    assert d2(f + g * c) == d2(f) + d2(g) * c
    d1f, d1g = f.derivative(), g.derivative()
    assert d2(f * g) == d2(f) * g + d1f * d1g * 2 + f * d2(g)


@settings(max_examples=25, deadline=None)
@given(ratfuns)
def test_second_derivative_against_sympy(f):
    x = sympy.Symbol("x")
    to_sym = lambda p: sum(sympy.Rational(c.numerator, c.denominator) * x**k for k, c in enumerate(p.coeffs))
    expected = sympy.diff(to_sym(f.numer) / to_sym(f.denom), x, 2)
    got = ratfun_second_derivative(f)
    assert sympy.simplify(expected - to_sym(got.numer) / to_sym(got.denom)) == 0
