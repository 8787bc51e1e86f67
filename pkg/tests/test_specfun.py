import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trigstirling.interval import Interval
from trigstirling.specfun import (
    CERTIFIED,
    INDETERMINATE,
    VIOLATED,
    ApproxParams,
    approx_ln,
    certify_margins,
    lngamma,
    log_ratio,
    sevli_batir_margins,
    stirling_correction,
    theorem2_margins,
    trigamma,
    trigamma_direct_sum,
)

F = Fraction
HALF = F(1, 2)


# -- trigamma ---------------------------------------------------------------


@pytest.mark.parametrize("tail", ["integral", "factorial"])
def test_trigamma_at_one_against_direct_sum(tail):
    t = trigamma(1, 128)
    d = trigamma_direct_sum(1, 128, tail=tail)
    pi2_6 = Interval.pi(200) ** 2 / 6
    assert t.overlaps(d)
    assert t.overlaps(pi2_6) and d.overlaps(pi2_6)
    assert t.lo > Fraction(16449340668, 10**10) and t.hi < Fraction(16449340669, 10**10)


def test_trigamma_at_half():
    t = trigamma(HALF, 128)
    assert t.overlaps(Interval.pi(200) ** 2 / 2)
    assert t.overlaps(trigamma_direct_sum(HALF, 128, terms=2000, tail="integral"))


def test_trigamma_recurrence_at_half():
    p = 128
    lhs = trigamma(F(3, 2), p)
    rhs = trigamma(HALF, p) - 4
    assert lhs.overlaps(rhs)
    for iv in (lhs, rhs):
        assert iv.width() < F(1, 2 ** (p - 4)) * abs(iv.lo_fraction())


def test_integral_tail_bounds_are_valid_but_crude():
    iv = trigamma_direct_sum(F(7, 3), 64, terms=50, tail="integral")
    assert iv.contains(trigamma(F(7, 3), 64).lo)
    assert iv.width() > F(1, 10**4)


@settings(max_examples=50, deadline=None)
@given(st.fractions(min_value=F(1, 100), max_value=100, max_denominator=997))
def test_trigamma_recurrence_property(x):
    diff = trigamma(x, 128) - trigamma(x + 1, 128)
    assert diff.contains(1 / x**2)


def test_trigamma_interval_argument():
    x = Interval(F(29, 10), F(31, 10), 128)
    iv = trigamma(x, 128)
    assert iv.overlaps(trigamma(3, 128))
    assert iv.lo < trigamma(F(31, 10), 128).lo and iv.hi > trigamma(F(29, 10), 128).hi


def test_trigamma_rejects_nonpositive():
    with pytest.raises(ValueError):
        trigamma(0)
    with pytest.raises(ValueError):
        trigamma(F(-1, 2))


def test_trigamma_width_decays_with_precision():
    for x in (HALF, F(7, 3), 40):
        a, b = trigamma(x, 128), trigamma(x, 192)
        assert b.width() < a.width()
        assert a.overlaps(b)


# -- ln Gamma ---------------------------------------------------------------


def test_lngamma_at_one_contains_zero():
    assert lngamma(1, 128).contains(0)


def test_lngamma_at_five():
    iv = lngamma(5, 128)
    assert iv.overlaps(Interval.exact(120, 200).log())


def test_lngamma_at_nine_halves():
    # Gamma(11/2) = (9/2)(7/2)(5/2)(3/2)(1/2) sqrt(pi)
    ref = Interval.exact(F(945, 32), 256).log() + Interval.pi(256).log() / 2
    assert lngamma(F(9, 2), 128).overlaps(ref)


def test_lngamma_integers_enclose_exact_factorials():
    for n in range(1, 31):
        exact = Interval.exact(math.factorial(n), 256).log()
        got = lngamma(n, 128)
        assert got.overlaps(exact)
        assert got.width() < F(1, 2**100)


def test_lngamma_rejects_nonpositive():
    with pytest.raises(ValueError):
        lngamma(0)


def test_stirling_correction_consistent_with_lngamma():
    for x in (1, F(5, 3), 25, 400):
        lead = Interval.exact(F(x) + HALF, 200) * Interval.exact(x, 200).log() - x
        lead = lead + (Interval.pi(200) * 2).log() / 2
        assert (stirling_correction(x, 128) + lead).overlaps(lngamma(x, 128))


# -- approximation family and margins ---------------------------------------


def test_approx_ln_at_one():
    p = 128
    got = approx_ln(ApproxParams(1, HALF), p)
    expected = (Interval.pi(200) * 2).log() / 2 - 1 + (Interval.pi(200) ** 2 / 2 - 4) / 12
    assert got.overlaps(expected)
    w = lngamma(1, p) - got
    assert w.lo > 0 and w.hi < F(1, 240)


def test_approx_ln_shift_zero_overshoots():
    assert (approx_ln(ApproxParams(1, 0), 128) - lngamma(1, 128)).lo > 0


def test_approx_ln_at_ten():
    w = lngamma(10, 128) - approx_ln(ApproxParams(10, HALF), 128)
    assert w.lo > F(1, 240000) - F(11, 672000000)
    assert w.hi < F(1, 240000)


def test_log_ratio_agrees_with_direct_difference():
    for x, a in ((3, HALF), (F(7, 2), 0), (50, 1)):
        direct = lngamma(x, 160) - approx_ln(ApproxParams(x, a), 160)
        assert log_ratio(x, a, 128).overlaps(direct)


def test_approx_params_validation():
    with pytest.raises(ValueError):
        ApproxParams(0, HALF)
    with pytest.raises(ValueError):
        ApproxParams(1, -2)
    with pytest.raises(TypeError):
        ApproxParams(1.5, HALF)


@pytest.mark.parametrize("x", [1, 2])
def test_theorem2_margins_positive(x):
    lo, up = theorem2_margins(x, 128)
    assert lo.is_positive() and up.is_positive()


def test_theorem2_upper_margin_large_x():
    x = 1000
    _, up = theorem2_margins(x, 128)
    assert up.is_positive()
    assert up.hi_fraction() < F(11, 6720) / x**5 * F(101, 100)


def test_theorem2_rejects_small_x():
    with pytest.raises(ValueError):
        theorem2_margins(HALF)


@pytest.mark.parametrize("x", [1, HALF])
def test_sevli_batir_positive(x):
    lo, up = sevli_batir_margins(x, 128)
    assert lo.is_positive() and up.is_positive()


def test_sevli_batir_at_hundred():
    lo, up = sevli_batir_margins(100, 128)
    assert lo.is_positive() and up.is_positive()
    assert lo.hi_fraction() < F(1, 240 * 10**6)


def test_certify_escalates_then_gives_up():
    calls = []

    def straddling(x, prec):
        calls.append(prec)
        iv = Interval(-1, 1, prec)
        return iv, iv

    res = certify_margins(straddling, 1, 128, 512)
    assert res.verdict == INDETERMINATE
    assert calls == [128, 256, 512]


def test_certify_succeeds_after_escalation():
    def sharpening(x, prec):
        iv = Interval(F(-1, 2) if prec < 256 else F(1, 4), 1, prec)
        return iv, iv

    res = certify_margins(sharpening, 1, 128)
    assert res.verdict == CERTIFIED and res.precision == 256


def test_certify_reports_violation():
    def negative(x, prec):
        return Interval(-2, -1, prec), Interval(1, 2, prec)

    assert certify_margins(negative, 1, 128).verdict == VIOLATED


def test_oracle_agreement_random_points():
    rng = random.Random(20241016)
    for _ in range(20):
        x = F(rng.randint(1, 10**6), 10**4)
        assert trigamma(x, 128).overlaps(trigamma_direct_sum(x, 128))


def test_lngamma_width_decays_with_precision():
    for x in (F(1, 3), 7, F(201, 2)):
        a, b = lngamma(x, 128), lngamma(x, 192)
        assert b.width() < a.width() and a.overlaps(b)
