import math
import random

import mpmath
import pytest
from hypothesis import given, strategies as st

from apery8.evaluator import PathSpec, eval_xlincomb, eval_xword
from apery8.forms import Omega
from apery8.numfield import ONE
from apery8.words import (A, AlphabetMismatch, IllFormedWord, LinComb, MixedLetter, Word, expand_mixed,
                          reverse_path, shuffle, shuffle_lin, x)

letters = st.sampled_from([A, x(0), x(1), x(2), x(4), x(6)])
words = st.lists(letters, max_size=4).map(Word)


@given(words, words)
def test_shuffle_counts_and_commutes(u, v):
    s = shuffle(u, v)
    assert sum(int(c.coeffs[0]) for c in s.values()) == math.comb(len(u) + len(v), len(u))
    assert s == shuffle(v, u)


@given(words, words, words)
def test_shuffle_associative(u, v, w):
    uv = shuffle_lin(shuffle(u, v), LinComb.word(w))
    vw = shuffle_lin(LinComb.word(u), shuffle(v, w))
    assert uv == vw


def test_shuffle_small_case():
    a, b = x(0), x(4)
    assert shuffle((a,), (b,)) == LinComb({Word((a, b)): 1, Word((b, a)): 1})
    assert shuffle((a,), (a,)) == LinComb({Word((a, a)): 2})


def test_shuffle_rejects_mixed_alphabets():
    with pytest.raises(AlphabetMismatch):
        shuffle((Omega.W1,), (x(0),))


def test_expand_mixed():
    w = Word((MixedLetter(Omega.W0, ONE), Omega.W1, Omega.W2))
    assert expand_mixed(w) == LinComb({Word((Omega.W0, Omega.W1, Omega.W2)): 1, Word((Omega.W1, Omega.W2)): 1})
    with pytest.raises(IllFormedWord):
        expand_mixed(Word((Omega.W1, MixedLetter(Omega.W0, ONE))))


@given(words)
def test_reverse_path_is_an_involution(w):
    s1, r = reverse_path(w)
    s2, back = reverse_path(r)
    assert back == w and s1 * s2 == 1


def test_reverse_path_numeric():
    rng = random.Random(3)
    pool = [x(1), x(2), x(3), x(5), x(6), x(7)]
    for _ in range(6):
        w = Word(rng.choice(pool) for _ in range(rng.randint(1, 3)))
        a, b = mpmath.mpf("0.1"), mpmath.mpf("0.8")
        fwd = eval_xword(w, PathSpec.straight(a, b)).value
        sign, r = reverse_path(w)
        back = eval_xword(r, PathSpec.straight(b, a)).value
        assert abs(fwd - sign * back) < 1e-12


def test_shuffle_product_of_integrals():
    # iterated integrals along one path multiply by shuffles
    path = PathSpec.straight(0, mpmath.mpf("0.7"))
    u, v = Word((x(1), x(2))), Word((x(3),))
    prod = eval_xword(u, path).value * eval_xword(v, path).value
    assert abs(eval_xlincomb(shuffle(u, v), path).value - prod) < 1e-15


def test_linear_combination_arithmetic():
    p = LinComb.word((x(0),), 2) + LinComb.word((x(1),))
    assert (p - p) == LinComb()
    assert p.scale(3)[Word((x(0),))] == 6 * ONE
    assert p.concat(LinComb.word((A,))) == LinComb({Word((x(0), A)): 2, Word((x(1), A)): 1})
