"""Convergence classes, path splitting through 0, and shuffle regularization.

Divergent iterated integrals on [0, 1] are regularized with one formal variable
T standing for -log(eps) at either end: words ending in dt/t diverge at 0 and
words starting with dt/(1 - t) diverge at 1. Every word is a polynomial in T
whose coefficients are convergent words; the constant term is the regularized
value. A convergent integral from 1 to z is split through 0 by Chen's rule into
products of such polynomials, and the T-dependence cancels in the sum.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from .evaluator.core import EvalConfig, EvalResult, Engine, PathSpec, eval_omega_lincomb, eval_xlincomb
from .evaluator.engine import Segment
from .forms import Omega
from .numfield import ONE, CycloQ8
from .words import A, LinComb, Word, XLetter, reverse_path

__all__ = ["Convergence", "classify", "chen_split", "rescale_to_unit", "RegPolynomial",
           "shuffle_regularize", "epsilon_split_eval", "arc_eval", "epsilon_cutoff_value",
           "omega6_difference", "omega6_difference_closed", "RegularizationError"]


class RegularizationError(ArithmeticError):
    pass


class Convergence(enum.Enum):
    CONVERGENT = "convergent"
    DIV_UPPER = "divergent-upper"
    DIV_LOWER = "divergent-lower"
    DIV_BOTH = "divergent-both"


def _same_point(p, z) -> bool:
    if isinstance(p, CycloQ8) and isinstance(z, CycloQ8):
        return p == z
    return abs(complex(p) - complex(z)) < 1e-13


def _pole_is(letter: XLetter, z) -> bool:
    return letter.pole is not None and _same_point(letter.pole, z)


def classify(w, z=ONE) -> Convergence:
    """Convergence of the integral of ``w`` from 0 to ``z``."""
    w = Word(w)
    if not w:
        return Convergence.CONVERGENT
    upper = _pole_is(w[0], z)
    lower = w[-1].pole is None
    if upper and lower:
        return Convergence.DIV_BOTH
    if upper:
        return Convergence.DIV_UPPER
    if lower:
        return Convergence.DIV_LOWER
    return Convergence.CONVERGENT


def rescale_to_unit(w, z) -> Word:
    """Poles divided by z: the integral over 0 -> z becomes one over 0 -> 1."""
    if isinstance(z, CycloQ8):
        zi = z.inverse()
        scale = lambda p: p * zi if isinstance(p, CycloQ8) else complex(p) / complex(z)
    else:
        zc = mpmath.mpmathify(z)
        scale = lambda p: (p.embed(160) if isinstance(p, CycloQ8) else p) / zc
    return Word(l if l.pole is None else XLetter(scale(l.pole)) for l in Word(w))


def chen_split(w, z=None) -> list[tuple[int, Word, Word]]:
    """Terms (sign, u, v) with integral_1^z w = sum sign * integral_0^z u * integral_0^1 v.

    ``u`` is a prefix of ``w``; ``v`` is the reversed remaining suffix, the reversal
    turning the piece 1 -> 0 into 0 -> 1.
    """
    w = Word(w)
    out = []
    for k in range(len(w) + 1):
        sign, v = reverse_path(w[k:])
        out.append((sign, w[:k], v))
    return out


# ---------------------------------------------------------------------------
# T-polynomials


@dataclass(frozen=True)
class RegPolynomial:
    """sum_k T^k * coeffs[k], each coefficient a combination of convergent words on 0 -> 1."""

    coeffs: dict = field(default_factory=dict)

    @classmethod
    def constant(cls, lc: LinComb) -> RegPolynomial:
        return cls({0: lc} if len(lc) else {})

    @property
    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def __add__(self, other: RegPolynomial) -> RegPolynomial:
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k, LinComb()) + v
            if len(s):
                out[k] = s
            else:
                out.pop(k, None)
        return RegPolynomial(out)

    def scale(self, c) -> RegPolynomial:
        return RegPolynomial({k: v.scale(c) for k, v in self.coeffs.items() if not CycloQ8.coerce(c).is_zero()})

    def times_T(self) -> RegPolynomial:
        return RegPolynomial({k + 1: v for k, v in self.coeffs.items()})

    def __mul__(self, other: RegPolynomial) -> RegPolynomial:
        from .words import shuffle_lin
        out = RegPolynomial()
        for i, u in self.coeffs.items():
            for j, v in other.coeffs.items():
                out = out + RegPolynomial({i + j: shuffle_lin(u, v)})
        return out

    def at_zero(self) -> LinComb:
        return self.coeffs.get(0, LinComb())

    def __eq__(self, other):
        return isinstance(other, RegPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted((k, hash(v)) for k, v in self.coeffs.items())))

    def __str__(self):
        if not self.coeffs:
            return "0"
        return "\n".join(f"T^{k}: [{v}]".replace("\n", "; ") for k, v in sorted(self.coeffs.items()))


def _is_upper(letter) -> bool:
    return letter.pole is not None and _same_point(letter.pole, ONE)


@lru_cache(maxsize=20000)
def _reg(w: Word) -> RegPolynomial:
    n = len(w)
    if n and w[-1].pole is None:
        k = 0
        while k < n and w[n - 1 - k].pole is None:
            k += 1
        v = w[: n - k]
        if not v:
            return RegPolynomial({k: LinComb.word((), Fraction(1, math.factorial(k)))})
        tail = Word((A,) * (k - 1))
        # (v a^{k-1}) sh a = k w + sum over a inserted inside v
        acc = _reg(v + tail).times_T()
        for i in range(len(v)):
            acc = acc + _reg(v[:i] + Word((A,)) + v[i:] + tail).scale(-1)
        return acc.scale(Fraction(1, k))
    if n and _is_upper(w[0]):
        one = w[0]
        k = 0
        while k < n and _is_upper(w[k]):
            k += 1
        v = w[k:]
        if not v:
            return RegPolynomial({k: LinComb.word((), Fraction(1, math.factorial(k)))})
        head = Word((one,) * (k - 1))
        acc = _reg(head + v).times_T()
        for i in range(1, len(v) + 1):
            acc = acc + _reg(head + v[:i] + Word((one,)) + v[i:]).scale(-1)
        return acc.scale(Fraction(1, k))
    return RegPolynomial.constant(LinComb.word(w))


def shuffle_regularize(w) -> RegPolynomial:
    """The T-polynomial of the word on 0 -> 1 (constant when convergent)."""
    if isinstance(w, LinComb):
        out = RegPolynomial()
        for u, c in w.items():
            out = out + _reg(u).scale(c)
        return out
    return _reg(Word(w))


# ---------------------------------------------------------------------------
# numerics


def _eval_poly(poly: RegPolynomial, cfg) -> dict:
    out = {}
    for k, lc in poly.coeffs.items():
        const = sum((c for u, c in lc.items() if not len(u)), CycloQ8())
        rest = LinComb({u: c for u, c in lc.items() if len(u)})
        r = eval_xlincomb(rest, PathSpec.straight(0, 1), cfg) if len(rest) else \
            EvalResult(mpmath.mpc(0), 0.0, Engine.ODE_CASCADE)
        out[k] = (r.value + const.embed(cfg.precision + 20), r.abs_error_estimate)
    return out


def _shift(p: dict, c) -> dict:
    """p(T + c)."""
    out: dict = {}
    for k, (v, e) in p.items():
        for j in range(k + 1):
            b = math.comb(k, j) * c ** (k - j)
            ov, oe = out.get(j, (0, 0.0))
            out[j] = (ov + b * v, oe + float(abs(b)) * e)
    return out


def _mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for i, (a, ea) in p.items():
        for j, (b, eb) in q.items():
            ov, oe = out.get(i + j, (0, 0.0))
            out[i + j] = (ov + a * b, oe + ea * float(abs(b)) + eb * float(abs(a)))
    return out


def epsilon_split_eval(lc: LinComb, z=None, cfg: EvalConfig | None = None) -> EvalResult:
    """Integral of ``lc`` from 1 to z (default mu) by splitting the path through 0.

    Each piece is shuffle-regularized; the pieces on 0 -> z are rescaled to
    0 -> 1 with T shifted by log z. Raises RegularizationError when the
    T-dependence does not cancel.
    """
    from .numfield import MU
    cfg = cfg or EvalConfig()
    z = MU if z is None else z
    with mpmath.workprec(max(mpmath.mp.prec, cfg.precision + 20)):
        zc = z.embed(cfg.precision + 20) if isinstance(z, CycloQ8) else mpmath.mpmathify(z)
        logz = mpmath.log(zc)
        outer_cache: dict = {}
        inner_cache: dict = {}
        total: dict = {}
        for w, c in lc.items():
            cv = c.embed(cfg.precision + 20)
            for sign, u, v in chen_split(w):
                if u not in outer_cache:
                    outer_cache[u] = _shift(_eval_poly(_reg(rescale_to_unit(u, z)), cfg), logz)
                if v not in inner_cache:
                    inner_cache[v] = _eval_poly(_reg(v), cfg)
                for k, (val, err) in _mul(outer_cache[u], inner_cache[v]).items():
                    ov, oe = total.get(k, (0, 0.0))
                    total[k] = (ov + sign * cv * val, oe + float(abs(cv)) * err)
        value, err = total.get(0, (mpmath.mpc(0), 0.0))
        for k, (val, e) in total.items():
            if k and abs(val) > 100 * (e + 2.0 ** (8 - cfg.precision)):
                raise RegularizationError(f"T^{k} coefficient {mpmath.nstr(val, 6)} does not cancel")
        return EvalResult(mpmath.mpc(value), err, Engine.ODE_CASCADE)


def arc_eval(lc: LinComb, z=None, cfg: EvalConfig | None = None) -> EvalResult:
    """The same integral along the unit-circle arc from 1 to z."""
    from .numfield import MU
    z = MU if z is None else z
    with mpmath.workprec(max(mpmath.mp.prec, 160)):
        zc = z.embed(160) if isinstance(z, CycloQ8) else mpmath.mpmathify(z)
        return eval_xlincomb(lc, PathSpec.arc(0, mpmath.arg(zc)), cfg)


def epsilon_cutoff_value(w, eps_exponents=tuple(k / 2 for k in range(4, 18)), cfg: EvalConfig | None = None):
    """Constant term in log(eps) of the integral over [eps, 1 - eps], by extrapolation.

    The cut-off integral is fitted as a polynomial in log(eps) plus eps and
    eps^2 times others; the constant term is the regularized value at T = 0.
    Cancellation in 1 - t limits 64-bit runs to eps >= 10^-8.5, which leaves
    the extrapolated constant good to about 1e-8.
    """
    w = Word(w)
    # cut-off values grow like log(eps)^deg, so an absolute 1e-15 is below 64-bit resolution
    cfg = cfg or EvalConfig(target_abs_error=1e-13)
    deg = sum(1 for l in w if l.pole is None or _is_upper(l))
    with mpmath.workprec(160):
        rows, rhs = [], []
        for p in eps_exponents:
            eps = mpmath.mpf(10) ** (-p)
            # a pole at distance eps from a long segment slows quadrature; use decade pieces
            cuts = [eps * mpmath.mpf(10) ** k for k in range(int(p))] + [mpmath.mpf(10) ** (p - int(p) - 1)]
            cuts = [c for c in cuts if c < mpmath.mpf(0.5)]
            pts = cuts + [1 - c for c in reversed(cuts)]
            path = PathSpec(tuple(Segment(a, b) for a, b in zip(pts, pts[1:])))
            val = eval_xlincomb(LinComb.word(w), path, cfg).value
            L = mpmath.log(eps)
            rows.append([eps ** k * L ** j for k in range(3) for j in range(deg + 1)])
            rhs.append(val)
        sol, _ = mpmath.qr_solve(mpmath.matrix(rows), mpmath.matrix(rhs))
        return sol[0]


# ---------------------------------------------------------------------------
# the omega_6 combination


def omega6_difference(xv=1, cfg: EvalConfig | None = None) -> EvalResult:
    """integral_0^x (omega_{-3} - omega_6), whose 1/t singularities cancel."""
    lc = LinComb({Word((Omega.Wm3,)): 1, Word((Omega.W6,)): -1})
    return eval_omega_lincomb(lc, xv, cfg)


def omega6_difference_closed(xv=1):
    """The same integral from the regularized primitives of both forms.

    Reg int_0^x omega_{-3} = log x - log(1 + sqrt(1 + x^2)) + log 2 and
    Reg int_0^x omega_6 = log x - log(1 + sqrt(1 - x^4))/2 + log(2)/2.
    """
    x = mpmath.mpmathify(xv)
    return mpmath.log(2) / 2 - mpmath.log(1 + mpmath.sqrt(1 + x * x)) + mpmath.log(1 + mpmath.sqrt(1 - x ** 4)) / 2
