import itertools
import math
from fractions import Fraction

import mpmath
import pytest

from apery8.oracle import (alt_zeta, cvz_alternating, leshchiner_check, mhs, partial_sums, sum_series, tsum)
from apery8.series_builder import Family, Kernel, SeriesSpec


@pytest.fixture(autouse=True)
def _precision():
    with mpmath.workprec(120):
        yield


def spec(family, s, signs, kernels=(), strict=(), x="1", tail_n=0):
    return SeriesSpec(Family(family), tuple(s), tuple(signs), tuple(Kernel(k) for k in kernels),
                      tuple(strict), x, tail_n)


def test_finite_sums():
    assert mhs((2,), 3) == Fraction(49, 36)
    assert mhs((1, 1), 2, star=True) == Fraction(7, 4)
    assert mhs((), 5) == 1
    assert tsum((2,), 2) == Fraction(10, 9)
    assert tsum((1, 1), 2, star=True) == Fraction(13, 9)
    assert tsum((), 4) == 1


def _brute(s, n, star, den):
    rel = (lambda a, b: a >= b) if star else (lambda a, b: a > b)
    total = Fraction(0)
    for idx in itertools.product(range(1, n + 1), repeat=len(s)):
        if all(rel(idx[i], idx[i + 1]) for i in range(len(s) - 1)):
            term = Fraction(1)
            for k, e in zip(idx, s):
                term /= Fraction(den(k)) ** e
            total += term
    return total


@pytest.mark.parametrize("s", [(1,), (2, 1), (1, 1, 1), (3, 1, 2)])
@pytest.mark.parametrize("star", [False, True])
def test_finite_sums_brute_force(s, star):
    for n in (1, 4, 7):
        assert mhs(s, n, star) == _brute(s, n, star, lambda k: k)
        assert tsum(s, n, star) == _brute(s, n, star, lambda k: 2 * k - 1)


@pytest.mark.parametrize("sp", [
    spec("b", (1, 1), (-1, 1), ("2n+1", "2n"), x="1/2"),
    spec("a", (2, 1), (1, -1), ("2n-1", "2n+1"), (">", ">="), x="sqrt(2)/2"),
    spec("b", (1, 2, 1), (-1, 1, -1), ("2n+1", "2n", "2n"), x="sqrt(3)/2", tail_n=1),
])
def test_partial_sums_brute_force(sp):
    N = 9
    S = partial_sums(sp, N)
    xv = sp.x.value(120)
    rel = {">": lambda a, b: a > b, ">=": lambda a, b: a >= b}
    brute = mpmath.mpf(0)
    for idx in itertools.product(range(0, N + 1), repeat=sp.depth):
        bounds = list(idx) + [sp.tail_n]
        if not all(rel[st](bounds[i], bounds[i + 1]) for i, st in enumerate(sp.strict)):
            continue
        n1 = idx[0]
        c = Fraction(math.comb(2 * n1, n1), 4 ** n1)
        c = 1 / c if sp.family is Family.INVERSE_BINOMIAL_B else c
        term = mpmath.mpf(c.numerator) / c.denominator * xv ** (2 * n1)
        for n, e, k, sj in zip(idx, sp.signs, sp.kernels, sp.s):
            term *= mpmath.mpf(e) ** n / mpmath.mpf(k(n)) ** sj
        brute += term
    assert abs(S[N] - brute) < 1e-30


def test_coefficient_spot_check_runs():
    # the recurrence is compared with the exact b_50 on the way past n = 50
    assert len(partial_sums(spec("b", (2,), (-1,)), 60)) == 61


def test_printed_values():
    assert abs(sum_series(spec("b", (2, 1), (-1, -1))).value + mpmath.mpf("0.0851511799")) < 5e-11
    got = sum_series(spec("b", (1, 1), (-1, -1), x="sqrt(2)/2")).value
    assert abs(got - mpmath.mpf("-0.07667150401885149")) < 1e-14


def test_log_family():
    got = sum_series(spec("a", (1,), (-1,), x="sqrt(3)/2")).value
    assert abs(got - mpmath.log(mpmath.mpf(4) / 3 * (mpmath.sqrt(7) - 2))) < 1e-18


@pytest.mark.parametrize("sp", [
    spec("b", (2,), (-1,)),
    spec("b", (3,), (-1,)),
    spec("a", (1,), (-1,)),
    spec("b", (2, 1), (-1, 1)),
    spec("a", (1, 1), (-1, 1), ("2n-1", "2n")),
])
def test_value_inside_alternating_envelope(sp):
    # outer terms alternate and shrink, so the limit lies between neighbouring partial sums
    r = sum_series(sp)
    S = partial_sums(sp, 3001)
    for n in (2000, 3000):
        lo, hi = sorted((S[n], S[n + 1]))
        assert lo - r.abs_error_estimate <= r.value.real <= hi + r.abs_error_estimate


def test_error_estimate_reported():
    r = sum_series(spec("b", (1, 1), (-1, -1)))
    assert 0 < r.abs_error_estimate < 1e-15


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_alternating_zeta(n):
    direct = alt_zeta(n)
    assert abs(direct.value - (2 ** (1 - n) - 1) * mpmath.zeta(n)) < 1e-12
    assert direct.abs_error_estimate < 1e-12


def test_cvz_on_log2():
    assert abs(cvz_alternating([mpmath.mpf(1) / (k + 1) for k in range(60)]) - mpmath.log(2)) < 1e-30


@pytest.mark.parametrize("k", [1, 2])
@pytest.mark.parametrize("variant", [1, 2, 3, 4])
def test_leshchiner(k, variant):
    r = leshchiner_check(k, variant, 2000)
    assert r.diff < 1e-6
    assert r.tail < 1e-100
    lhs, rhs, diff = r
    assert diff == abs(lhs - rhs)


def test_leshchiner_small_truncation():
    assert leshchiner_check(1, 1, 500).diff < 1e-8
    assert abs(leshchiner_check(1, 2, 500).lhs - mpmath.zeta(3)) < 1e-30
    assert abs(leshchiner_check(1, 3, 500).lhs - mpmath.pi / 4) < 1e-30


def test_bernoulli_reading_fails():
    assert leshchiner_check(1, 2, 200, reading="bernoulli").diff > 1e-3
