"""Algebraic 1-forms ``t^a (1-t^2)^(b/2) (1+t^2)^(c/2) dt`` and the named omega letters.

Every form produced by the series recursions is a monomial of this shape, so
products with prefactor functions such as ``t/sqrt(1+t^2)`` are exponent
additions. Half-integer exponents are stored doubled.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import mpmath


@dataclass(frozen=True, order=True)
class AlgForm:
    """Density ``t^a * (1-t^2)^(b2/2) * (1+t^2)^(c2/2)``.

    Used both as a 1-form (times ``dt``) and as a plain prefactor function.
    """

    a: int = 0
    b2: int = 0
    c2: int = 0

    def __mul__(self, other: AlgForm) -> AlgForm:
        if not isinstance(other, AlgForm):
            return NotImplemented
        return AlgForm(self.a + other.a, self.b2 + other.b2, self.c2 + other.c2)

    def inverse(self) -> AlgForm:
        return AlgForm(-self.a, -self.b2, -self.c2)

    @property
    def omega(self) -> Omega | None:
        return _FORM_TO_OMEGA.get(self)

    def __call__(self, t, tc=None):
        """Pointwise value with mpmath; ``tc`` optionally supplies 1 - t accurately."""
        t = mpmath.mpmathify(t)
        one_minus = (1 - t) if tc is None else tc
        v = t ** self.a if self.a else mpmath.mpf(1)
        if self.b2:
            v *= (one_minus * (1 + t)) ** (Fraction(self.b2, 2))
        if self.c2:
            v *= (1 + t * t) ** (Fraction(self.c2, 2))
        return v

    def laurent_at_zero(self, order: int) -> dict[int, Fraction]:
        """Coefficients of t^k, k < a + order, in the expansion at t = 0."""
        # (1-t^2)^(b/2) (1+t^2)^(c/2) = sum_k e_k t^(2k)
        b = Fraction(self.b2, 2)
        c = Fraction(self.c2, 2)
        nterms = max(order // 2 + 1, 1)
        pb = [_binom(b, k) * (-1) ** k for k in range(nterms)]
        pc = [_binom(c, k) for k in range(nterms)]
        out: dict[int, Fraction] = {}
        for k in range(nterms):
            e = sum(pb[i] * pc[k - i] for i in range(k + 1))
            if e:
                out[self.a + 2 * k] = e
        return out

    def __str__(self):
        om = self.omega
        if om is not None:
            return str(om)
        parts = []
        if self.a:
            parts.append(f"t^{self.a}")
        if self.b2:
            parts.append(f"(1-t^2)^({Fraction(self.b2, 2)})")
        if self.c2:
            parts.append(f"(1+t^2)^({Fraction(self.c2, 2)})")
        return "f[" + "*".join(parts or ["1"]) + "]"


def _binom(alpha: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out = out * (alpha - i) / (i + 1)
    return out


class Omega(enum.Enum):
    """The named algebraic 1-forms."""

    W0 = (-1, 0, 0)
    W1 = (0, -1, 0)
    Wm1 = (0, 0, -1)
    W2 = (1, -2, 0)
    Wm2 = (1, 0, -2)
    W3 = (-1, -1, 0)
    Wm3 = (-1, 0, -1)
    W4 = (1, -1, -1)
    W5 = (1, -1, 0)
    Wm5 = (1, 0, -1)
    W6 = (-1, -1, -1)
    W20 = (-1, -2, 0)
    Wm20 = (-1, 0, -2)

    @property
    def form(self) -> AlgForm:
        return AlgForm(*self.value)

    @property
    def index(self) -> str:
        name = self.name[1:]
        return "-" + name[1:] if name.startswith("m") else name

    def __call__(self, t, tc=None):
        return self.form(t, tc)

    def __str__(self):
        return f"w[{self.index}]"

    def __repr__(self):
        return f"Omega.{self.name}"

    @classmethod
    def signed(cls, k: int, sign: int) -> Omega:
        """omega_{sign*k}; the self-paired letters 0, 4, 6 ignore the sign."""
        if k in (0, 4, 6):
            return cls[f"W{k}"]
        return cls[f"W{k}"] if sign > 0 else cls[f"Wm{k}"]


_FORM_TO_OMEGA = {AlgForm(*o.value): o for o in Omega}


def as_letter(form: AlgForm):
    """Canonical letter for a density: the named omega when one matches."""
    om = form.omega
    return om if om is not None else form


def form_of(letter) -> AlgForm:
    if isinstance(letter, Omega):
        return letter.form
    if isinstance(letter, AlgForm):
        return letter
    raise TypeError(f"{letter!r} is not an algebraic form")
