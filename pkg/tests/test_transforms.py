import random

import mpmath
import pytest

from apery8.evaluator import EvalConfig, eval_omega_word, eval_xlincomb
from apery8.forms import Omega
from apery8.transforms import (CAYLEY, LEVEL8, DomainError, endpoint_cayley, endpoint_level8,
                               image_path, rewrite_word)



@pytest.fixture(autouse=True)
def _precision():
    with mpmath.workprec(80):
        yield


def density(lc, u):
    tot = 0
    for w, c in lc.items():
        (letter,) = w
        tot += c.embed(80) * (1 / u if letter.pole is None else 1 / (letter.pole.embed(80) - u))
    return tot


def level8_t(u):
    return mpmath.sqrt(2) * u / mpmath.sqrt(1 + u ** 4)


@pytest.mark.parametrize("om", sorted(LEVEL8.domain, key=str))
def test_level8_pullback_density(om):
    rng = random.Random(str(om))
    for _ in range(6):
        u = mpmath.mpf(rng.uniform(0.05, 0.95))
        dt = mpmath.diff(level8_t, u)
        assert abs(om(level8_t(u)) * dt - density(LEVEL8.image(om), u)) < 1e-10


@pytest.mark.parametrize("om", sorted(CAYLEY.domain, key=str))
def test_cayley_pullback_density(om):
    # t = i(1 - u^2)/(1 + u^2) is tan(theta) on u = e^(i theta)
    rng = random.Random(str(om))
    for _ in range(6):
        th = mpmath.mpf(rng.uniform(0.05, 0.75))
        u = mpmath.expj(th)
        dt = 1j * (-4 * u) / (1 + u * u) ** 2
        assert abs(om(mpmath.tan(th)) * dt - density(CAYLEY.image(om), u)) < 1e-10


@pytest.mark.parametrize("table", [LEVEL8, CAYLEY], ids=["level8", "cayley"])
@pytest.mark.parametrize("xv", ["0.5", "0.9"])
def test_single_letter_integrals(table, xv):
    xv = mpmath.mpf(xv)
    for om in table.domain:
        if om in (Omega.W0, Omega.W20, Omega.Wm20, Omega.Wm3):
            continue        # divergent at 0 on their own
        lc, _ = rewrite_word(table, (om,), xv)
        lhs = eval_omega_word((om,), xv).value
        rhs = eval_xlincomb(lc, image_path(table, xv)).value
        assert abs(lhs - rhs) < 1e-10, om


@pytest.mark.parametrize("table,word", [
    (LEVEL8, (Omega.W4, Omega.W1)),
    (LEVEL8, (Omega.Wm1, Omega.W4, Omega.W1)),
    (LEVEL8, (Omega.Wm2, Omega.Wm1)),
    (CAYLEY, (Omega.Wm1, Omega.Wm2, Omega.Wm1)),
    (CAYLEY, (Omega.W0, Omega.Wm1)),
])
def test_word_rewrites(table, word):
    xv = mpmath.mpf("0.8")
    lc, _ = rewrite_word(table, word, xv)
    lhs = eval_omega_word(word, xv, EvalConfig(target_abs_error=1e-18)).value
    rhs = eval_xlincomb(lc, image_path(table, xv)).value
    assert abs(lhs - rhs) < 1e-14


def test_domain_errors():
    with pytest.raises(DomainError):
        LEVEL8.image(Omega.W3)
    with pytest.raises(DomainError):
        CAYLEY.image(Omega.W4)


def test_endpoints():
    assert endpoint_level8(1) == 1 and endpoint_level8(0) == 0
    t = endpoint_level8(mpmath.sqrt(3) / 2)
    assert abs(t - mpmath.sqrt((4 - mpmath.sqrt(7)) / 3)) < 1e-20
    assert abs(level8_t(t) - mpmath.sqrt(3) / 2) < 1e-20
    lam = endpoint_cayley(1)
    assert abs(lam - mpmath.expjpi(mpmath.mpf(1) / 4)) < 1e-20
    xv = mpmath.mpf("0.3")
    assert abs(endpoint_cayley(xv) - mpmath.sqrt((1 + 1j * xv) / (1 - 1j * xv))) < 1e-20
    with pytest.raises(ValueError):
        endpoint_level8(2)
