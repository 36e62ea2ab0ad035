import cmath
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from apery8.numfield import I, MU, ONE, SQRT2, ZERO, CycloQ8, root_exponent, root_of_unity

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)
elements = st.builds(CycloQ8, small, small, small, small)


@given(elements, elements, elements)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * (b * c) == (a * b) * c
    assert a * b == b * a


@given(elements)
def test_inverse(a):
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == ONE


@given(elements, elements)
def test_embedding_is_a_homomorphism(a, b):
    assert abs(complex(a * b) - complex(a) * complex(b)) < 1e-9 * (1 + abs(complex(a)) * abs(complex(b)))
    assert abs(complex(a + b) - complex(a) - complex(b)) < 1e-9


@given(elements)
def test_conjugate_matches_complex(a):
    assert abs(complex(a.conj()) - complex(a).conjugate()) < 1e-9


def test_roots_of_unity():
    assert MU ** 8 == ONE and MU ** 4 == -ONE
    assert MU ** 2 == I
    assert SQRT2 * SQRT2 == 2 * ONE
    for e in range(8):
        z = root_of_unity(e)
        assert root_exponent(z) == e
        assert abs(complex(z) - cmath.exp(1j * cmath.pi * e / 4)) < 1e-15
    assert root_exponent(SQRT2) is None


def test_silver_ratio_inverse():
    nu = ONE + SQRT2
    assert nu.inverse() == SQRT2 - ONE
    assert (SQRT2 - ONE).coeffs == (Fraction(-1), Fraction(1), Fraction(0), Fraction(-1))


def test_high_precision_embedding():
    import mpmath
    with mpmath.workprec(200):
        v = SQRT2.embed(200)
        assert abs(v - mpmath.sqrt(2)) < mpmath.mpf(2) ** -195


def test_zero_is_falsy():
    assert not ZERO and ONE
