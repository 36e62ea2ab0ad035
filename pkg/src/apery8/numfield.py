"""Exact arithmetic in the eighth cyclotomic field Q(mu), mu = exp(i*pi/4).

Elements are stored as ``c0 + c1*mu + c2*mu^2 + c3*mu^3`` with
:class:`fractions.Fraction` coefficients and the reduction ``mu^4 = -1``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from numbers import Rational as _RationalABC

import mpmath

Rational = Fraction

__all__ = ["Rational", "CycloQ8", "MU", "I", "SQRT2", "ONE", "ZERO", "root_of_unity"]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class CycloQ8:
    """An element of Q(mu), immutable and hashable."""

    __slots__ = ("_c", "_hash")

    def __init__(self, c0=0, c1=0, c2=0, c3=0):
        self._c = (_frac(c0), _frac(c1), _frac(c2), _frac(c3))
        self._hash = None

    @classmethod
    def coerce(cls, x) -> CycloQ8:
        if isinstance(x, CycloQ8):
            return x
        return cls(_frac(x))

    @property
    def coeffs(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self._c

    def __iter__(self):
        return iter(self._c)

    # ring structure -----------------------------------------------------
    def __add__(self, other):
        try:
            o = CycloQ8.coerce(other)
        except TypeError:
            return NotImplemented
        return CycloQ8(*(a + b for a, b in zip(self._c, o._c)))

    __radd__ = __add__

    def __neg__(self):
        return CycloQ8(*(-a for a in self._c))

    def __sub__(self, other):
        try:
            o = CycloQ8.coerce(other)
        except TypeError:
            return NotImplemented
        return CycloQ8(*(a - b for a, b in zip(self._c, o._c)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloQ8(*(a * other for a in self._c))
        if not isinstance(other, CycloQ8):
            return NotImplemented
        a, b = self._c, other._c
        out = [Fraction(0)] * 4
        for i in range(4):
            if not a[i]:
                continue
            for j in range(4):
                if not b[j]:
                    continue
                k = i + j
                if k >= 4:
                    out[k - 4] -= a[i] * b[j]
                else:
                    out[k] += a[i] * b[j]
        return CycloQ8(*out)

    __rmul__ = __mul__

    def galois(self, k: int) -> CycloQ8:
        """Apply the automorphism mu -> mu^k, k odd."""
        if k % 2 == 0:
            raise ValueError("k must be odd")
        out = CycloQ8()
        for i, c in enumerate(self._c):
            if c:
                out = out + root_of_unity(i * k) * c
        return out

    def conj(self) -> CycloQ8:
        # mu -> mu^{-1} = -mu^3
        c0, c1, c2, c3 = self._c
        return CycloQ8(c0, -c3, -c2, -c1)

    def norm(self) -> Fraction:
        """Absolute norm to Q: product of the four Galois conjugates."""
        p = self * self.galois(3) * self.galois(5) * self.galois(7)
        assert not any(p._c[1:]), p
        return p._c[0]

    def inverse(self) -> CycloQ8:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(mu)")
        others = self.galois(3) * self.galois(5) * self.galois(7)
        n = (self * others)._c[0]
        return others * (1 / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError
            return CycloQ8(*(a / other for a in self._c))
        if isinstance(other, CycloQ8):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return CycloQ8.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # comparisons ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self._c)

    def is_rational(self) -> bool:
        return not any(self._c[1:])

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, CycloQ8):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == (Fraction(other), 0, 0, 0)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._c) if any(self._c[1:]) else hash(self._c[0])
        return self._hash

    # numerics ---------------------------------------------------------------
    def embed(self, precision: int = 53):
        """Complex value as an ``mpmath.mpc`` at ``precision`` bits."""
        if precision < 53:
            raise ValueError("precision must be at least 53 bits")
        with mpmath.workprec(precision + 10):
            mu = mpmath.expjpi(mpmath.mpf(1) / 4)
            z = mpmath.mpc(0)
            p = mpmath.mpc(1)
            for c in self._c:
                if c:
                    z += p * mpmath.mpf(c.numerator) / c.denominator
                p *= mu
        with mpmath.workprec(precision):
            return +z

    def __complex__(self):
        return complex(self.embed(53))

    @cached_property
    def _cplx(self) -> complex:
        return complex(self)

    # rendering ---------------------------------------------------------------
    def __str__(self):
        parts = []
        for i, c in enumerate(self._c):
            if not c:
                continue
            mono = ("", "mu", "mu^2", "mu^3")[i]
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        if not parts:
            return "0"
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def __repr__(self):
        return "CycloQ8(" + ", ".join(str(c) for c in self._c) + ")"


def root_of_unity(e: int) -> CycloQ8:
    """mu^e for any integer e."""
    e %= 8
    sign = -1 if e >= 4 else 1
    c = [0, 0, 0, 0]
    c[e % 4] = sign
    return CycloQ8(*c)


ONE = CycloQ8(1)
ZERO = CycloQ8(0)
MU = CycloQ8(0, 1)
I = CycloQ8(0, 0, 1)
SQRT2 = CycloQ8(0, 1, 0, -1)


def cyclo_mul(a: CycloQ8, b: CycloQ8) -> CycloQ8:
    return a * b


def cyclo_conj(a: CycloQ8) -> CycloQ8:
    return a.conj()


def cyclo_embed(a: CycloQ8, precision: int = 106):
    return a.embed(precision)


def root_exponent(z: CycloQ8) -> int | None:
    """Return e with z == mu^e, or None if z is not an 8th root of unity."""
    for e in range(8):
        if root_of_unity(e) == z:
            return e
    return None
