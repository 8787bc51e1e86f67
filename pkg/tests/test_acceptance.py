"""Exit criteria: one test per criterion, each logging a PASS/FAIL line."""

import math
import random
import time
from fractions import Fraction
from math import comb, factorial

from trigstirling.analysis import (
    LEMMA_ORIENTATION,
    convergence_rate,
    optimality_scan,
    scan_argmin,
    sweep_sevli_batir,
    sweep_theorem2,
    verify_a_b_bounds,
    verify_u_pp,
    verify_v_pp,
)
from trigstirling.exactnum import bernoulli
from trigstirling.interval import Interval
from trigstirling.series import h_series
from trigstirling.specfun import lngamma, trigamma, trigamma_direct_sum

F = Fraction


def test_c1_series_coefficients(criterion):
    t0 = time.perf_counter()
    h = h_series(9)
    elapsed = time.perf_counter() - t0
    expected = {3: F(1, 240), 5: F(-11, 6720), 7: F(107, 80640), 9: F(-2911, 1520640)}
    got = {k: c for k, c in h.items()}
    ok = all(got[k] == expected.get(k, 0) for k in range(1, 10)) and elapsed < 1
    assert criterion("1 h-series coefficients exact through x^-9", ok, f"{elapsed:.3f}s")


def test_c2_proof_identities(criterion):
    t0 = time.perf_counter()
    ok = verify_u_pp() and verify_v_pp() and verify_a_b_bounds()
    elapsed = time.perf_counter() - t0
    assert criterion("2 u'', v'' (Q), a (A), b (B) exact identities", ok and elapsed < 5, f"{elapsed:.3f}s")


def test_c3_theorem2_integer_sweep(criterion):
    t0 = time.perf_counter()
    report = sweep_theorem2(range(1, 1001), 128, max_precision=128)
    elapsed = time.perf_counter() - t0
    ok = report.failures == 0 and len(report.points) == 1000 and report.precision_used == 128 and elapsed < 60
    assert criterion("3 integer sweep n = 1..1000 @128 bits", ok, f"failures={report.failures}, {elapsed:.1f}s")


def test_c4_real_grid_sweep(criterion):
    grid = [F(k, 10) for k in range(10, 1001)]
    t0 = time.perf_counter()
    report = sweep_theorem2(grid, 128, max_precision=128)
    elapsed = time.perf_counter() - t0
    ok = report.failures == 0 and len(report.points) == 991 and elapsed < 120
    assert criterion("4 real sweep x = 1.0, 1.1, ..., 100.0 @128 bits", ok, f"failures={report.failures}, {elapsed:.1f}s")


def test_c5_sevli_batir_sweep(criterion):
    grid = [F(k, 2) for k in range(2, 201)]
    report = sweep_sevli_batir(grid, 128, max_precision=128)
    ok = report.failures == 0 and len(report.points) == 199
    assert criterion("5 psi'(x+1/2) < ... < psi'(x) sweep x = 1, 3/2, ..., 100 @128 bits", ok, f"failures={report.failures}")


def test_c6_convergence_limits(criterion):
    grid = list(range(1000, 10001, 1000))
    t0 = time.perf_counter()
    half = convergence_rate(F(1, 2), grid, 256)
    zero = convergence_rate(0, grid, 256)
    elapsed = time.perf_counter() - t0
    s_half = float(dict(half.samples)[10000])
    s_zero = float(dict(zero.samples)[10000])
    ok = (
        abs(s_half * 240 - 1) < 0.01
        and abs(abs(s_zero) * 24 - 1) < 0.01
        and zero.orientation == LEMMA_ORIENTATION
        and math.copysign(1, s_zero) == math.copysign(1, float(zero.predicted_limit))
        and elapsed < 60
    )
    detail = f"n^3 w(1/2)={s_half:.8e}, n^2 w(0)={s_zero:.8e}, orientation {zero.orientation}, {elapsed:.2f}s"
    assert criterion("6 scaled limits at n = 10^4 @256 bits", ok, detail)


def test_c7_optimality(criterion):
    grid = [F(k, 8) for k in range(9)]
    results = {}
    for n in (100, 1000, 10000):
        best, certified = scan_argmin(optimality_scan(grid, n, 256))
        results[n] = (best, certified)
    ok = all(best == F(1, 2) and cert for best, cert in results.values())
    assert criterion("7 argmin_a |w_n(a)| = 1/2 for n = 100, 1000, 10000", ok, str(results))


def test_c8_oracle_equivalence(criterion):
    rng = random.Random(8)
    bound = F(1, 2**100)
    bad = []
    for _ in range(50):
        x = F(rng.randint(1, 10**6), 10**4)  # (0, 100]
        asym = trigamma(x, 128)
        direct = trigamma_direct_sum(x, 128)
        if not (asym.overlaps(direct) and asym.width() < bound and direct.width() < bound):
            bad.append(x)
    for n in range(1, 31):
        if not lngamma(n, 128).overlaps(Interval.exact(factorial(n), 320).log()):
            bad.append(("lngamma", n))
    assert criterion("8 trigamma routes agree (width < 2^-100); lngamma(1..30) = ln n!", not bad, f"bad={bad}")


def test_c9_bernoulli(criterion):
    rec = all(sum(comb(k + 1, j) * bernoulli(j) for j in range(k + 1)) == 0 for k in range(1, 51))
    K = 20
    b = [bernoulli(k) / factorial(k) for k in range(K + 1)]
    e = [F(1, factorial(j + 1)) for j in range(K + 1)]
    prod = [sum(b[i] * e[n - i] for i in range(n + 1)) for n in range(K + 1)]
    gf = prod[0] == 1 and all(c == 0 for c in prod[1:])
    assert criterion("9 Bernoulli recurrence (k <= 50) and generating function (order 20)", rec and gf)
