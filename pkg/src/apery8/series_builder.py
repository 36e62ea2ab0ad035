"""Iterated-integral representations of alternating Apery-type series.

A series is described by a :class:`SeriesSpec`. The builder peels one summation
index at a time with a closed-form step (one per family, kernel and weight) of
the shape

    sum_{m > n} c_m(x) / l(m)^s = sum_k P_k(x) * int_0^x W_k o c_n(t) kappa_k(t) dt

where every prefactor ``P_k`` and kernel ``kappa_k`` is a monomial form. The
next index's prefactor multiplies the previous kernel into a single new letter,
so the whole series becomes a sum of prefactors times words of monomial forms.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction

import mpmath

from .forms import AlgForm, Omega, as_letter, form_of
from .numfield import ONE, CycloQ8
from .words import LinComb, MixedLetter, TailForm, Word, expand_mixed

__all__ = [
    "Family", "Kernel", "RealArg", "SeriesSpec", "IntegralExpr", "UnsupportedCombination",
    "Step", "binomial_expand_step", "build_series_integral", "inverse_binomial_word",
    "Hyp", "HypKind", "hyperbolic_word", "hyp_to_omega", "hyperbolic_integral", "hyperbolic_spec",
    "resolve_composition", "canonical", "natural_terms",
]


class UnsupportedCombination(ValueError):
    """The requested series is outside what the step table can represent."""


class Family(enum.Enum):
    INVERSE_BINOMIAL_B = "b"
    BINOMIAL_A = "a"


class Kernel(enum.Enum):
    EVEN = "2n"
    ODD_PLUS = "2n+1"
    ODD_MINUS = "2n-1"

    @property
    def offset(self) -> int:
        return {"2n": 0, "2n+1": 1, "2n-1": -1}[self.value]

    @property
    def natural(self) -> str:
        """The inequality the step formula produces for the next index."""
        return ">=" if self is Kernel.ODD_PLUS else ">"

    def __call__(self, n: int) -> int:
        return 2 * n + self.offset


_RADICAL = re.compile(r"^\s*(?P<sign>[-+](?=sqrt))?(?:(?P<num>[-+]?\d+(?:/\d+)?)\s*\*?\s*)?"
                      r"(?:sqrt\((?P<rad>\d+(?:/\d+)?)\))?\s*(?:/\s*(?P<den>\d+))?\s*$")


@dataclass(frozen=True)
class RealArg:
    """A real argument ``r * sqrt(q)`` kept exactly, or a decimal literal."""

    r: Fraction = Fraction(1)
    q: Fraction = Fraction(1)
    literal: str | None = None

    @classmethod
    def parse(cls, text) -> RealArg:
        if isinstance(text, RealArg):
            return text
        if isinstance(text, (int, Fraction)):
            return cls(Fraction(text))
        if isinstance(text, float):
            return cls(literal=repr(text))
        if isinstance(text, mpmath.mpf):
            return cls(literal=mpmath.nstr(text, 40))
        t = str(text).replace(" ", "")
        m = _RADICAL.match(t)
        if m and (m.group("num") or m.group("rad")):
            r = Fraction(m.group("num") or 1)
            q = Fraction(m.group("rad") or 1)
            if m.group("den"):
                r /= int(m.group("den"))
            if m.group("sign") == "-":
                r = -r
            rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
            if rn * rn == q.numerator and rd * rd == q.denominator:
                r, q = r * Fraction(rn, rd), Fraction(1)
            return cls(r, q)
        try:
            mpmath.mpf(t)
        except (ValueError, TypeError) as exc:
            raise ValueError(f"cannot parse argument {text!r}") from exc
        return cls(literal=t)

    def value(self, prec: int = 128):
        with mpmath.workprec(prec):
            if self.literal is not None:
                return +mpmath.mpf(self.literal)
            v = mpmath.mpf(self.r.numerator) / self.r.denominator
            if self.q != 1:
                v *= mpmath.sqrt(mpmath.mpf(self.q.numerator) / self.q.denominator)
            return v

    @property
    def square(self) -> Fraction | None:
        """Exact x^2 when available."""
        return None if self.literal is not None else self.r * self.r * self.q

    def is_one(self) -> bool:
        return self.square == 1 and self.r > 0

    def __abs__(self):
        return abs(self.value(64))

    def __str__(self):
        if self.literal is not None:
            return self.literal
        if self.q == 1:
            return str(self.r)
        head = {1: "", -1: "-"}.get(self.r.numerator, f"{self.r.numerator}*")
        tail = "" if self.r.denominator == 1 else f"/{self.r.denominator}"
        return f"{head}sqrt({self.q}){tail}"


@dataclass(frozen=True)
class SeriesSpec:
    """``sum_{n_1 > ... > n_d > tail_n} c_{n_1}(x) prod eta_j^{n_j} / prod l_j(n_j)^{s_j}``.

    ``strict[j]`` is ">" or ">=" for the boundary between index j and j+1; the last
    entry is the boundary between ``n_d`` and ``tail_n``. ``c_n`` is
    ``4^n x^{2n}/binom(2n,n)`` for family b and ``binom(2n,n) x^{2n}/4^n`` for family a.
    """

    family: Family
    s: tuple[int, ...]
    signs: tuple[int, ...]
    kernels: tuple[Kernel, ...] = ()
    strict: tuple[str, ...] = ()
    x: RealArg = field(default_factory=RealArg)
    tail_n: int = 0

    def __post_init__(self):
        d = len(self.s)
        object.__setattr__(self, "s", tuple(int(v) for v in self.s))
        object.__setattr__(self, "signs", tuple(int(v) for v in self.signs))
        if not self.kernels:
            object.__setattr__(self, "kernels", (Kernel.EVEN,) * d)
        object.__setattr__(self, "kernels", tuple(Kernel(k) for k in self.kernels))
        if not self.strict:
            object.__setattr__(self, "strict", tuple(k.natural for k in self.kernels))
        object.__setattr__(self, "strict", tuple(str(v) for v in self.strict))
        object.__setattr__(self, "x", RealArg.parse(self.x))
        if not (len(self.signs) == len(self.kernels) == len(self.strict) == d):
            raise ValueError("s, signs, kernels and strict must have equal length")
        if any(v < 1 for v in self.s):
            raise ValueError("composition entries must be positive")
        if any(v not in (1, -1) for v in self.signs):
            raise ValueError("signs must be +1 or -1")
        if any(v not in (">", ">=") for v in self.strict):
            raise ValueError("strictness entries must be '>' or '>='")
        if self.tail_n < 0:
            raise ValueError("tail index must be nonnegative")
        if abs(self.x) > 1 + 1e-15:
            raise ValueError("|x| must be at most 1")
        lo = self.tail_n
        for k, st in zip(reversed(self.kernels), reversed(self.strict)):
            lo += st == ">"
            if k(lo) == 0:
                raise ValueError(f"kernel {k.value} vanishes at n = {lo}")

    @property
    def depth(self) -> int:
        return len(self.s)

    @property
    def weight(self) -> int:
        return sum(self.s)

    def cumulative_signs(self) -> tuple[int, ...]:
        out, e = [], 1
        for v in self.signs:
            e *= v
            out.append(e)
        return tuple(out)

    def label(self) -> str:
        parts = []
        for sj, ej, kj in zip(self.s, self.signs, self.kernels):
            p = f"{sj}b" if ej < 0 else str(sj)
            parts.append(p if kj is Kernel.EVEN else f"{p}@{kj.value}")
        rel = "".join("" if st == k.natural else "!" for st, k in zip(self.strict, self.kernels))
        tail = f"_{self.tail_n}" if self.tail_n else ""
        return f"{self.family.value}({','.join(parts)};{self.x}){rel}{tail}"

    def to_dict(self) -> dict:
        return {
            "family": self.family.value, "s": list(self.s), "signs": list(self.signs),
            "kernels": [k.value for k in self.kernels], "strict": list(self.strict),
            "x": str(self.x), "tail_n": self.tail_n,
        }

    @classmethod
    def from_dict(cls, d: dict) -> SeriesSpec:
        return cls(Family(d["family"]), tuple(d["s"]), tuple(d["signs"]),
                   tuple(Kernel(k) for k in d["kernels"]), tuple(d["strict"]),
                   RealArg.parse(d["x"]), int(d.get("tail_n", 0)))

    def leading_coefficient(self, n: int):
        """c_n(x) / x^{2n} as an exact rational."""
        c = Fraction(math.comb(2 * n, n), 4 ** n)
        return 1 / c if self.family is Family.INVERSE_BINOMIAL_B else c


# ---------------------------------------------------------------------------
# integral expressions


@dataclass
class IntegralExpr:
    """``sum_P P(x) * int_0^x terms[P]`` with monomial prefactors ``P``, times ``overall_scalar``."""

    parts: dict[AlgForm, LinComb]
    endpoint: RealArg
    overall_scalar: CycloQ8 = ONE

    def add(self, prefactor: AlgForm, terms: LinComb) -> None:
        cur = self.parts.get(prefactor, LinComb())
        new = cur + terms
        if len(new):
            self.parts[prefactor] = new
        else:
            self.parts.pop(prefactor, None)

    def scaled(self, c) -> IntegralExpr:
        return IntegralExpr(dict(self.parts), self.endpoint, self.overall_scalar * CycloQ8.coerce(c))

    def __add__(self, other: IntegralExpr) -> IntegralExpr:
        if self.endpoint != other.endpoint:
            raise ValueError("cannot add integrals with different endpoints")
        out = IntegralExpr({}, self.endpoint)
        for e in (self, other):
            for p, lc in e.parts.items():
                out.add(p, lc.scale(e.overall_scalar))
        return out

    def prefactor_value(self, p: AlgForm, prec: int = 128):
        x = self.endpoint.value(prec + 10)
        with mpmath.workprec(prec + 10):
            if x == 1 and p.b2 < 0:
                raise UnsupportedCombination(f"prefactor {p} is singular at x = 1")
            if x == 0 and p.a < 0:
                raise UnsupportedCombination(f"prefactor {p} is singular at x = 0")
            return p(x, (1 - x) if x != 1 else mpmath.mpf(0))

    def letters(self) -> set:
        return {l for lc in self.parts.values() for w in lc for l in w}

    def __str__(self):
        lines = []
        if self.overall_scalar != ONE:
            lines.append(f"scalar: {self.overall_scalar}")
        for p, lc in sorted(self.parts.items()):
            lines.append(f"prefactor {_prefactor_str(p)}, endpoint x = {self.endpoint}:")
            for ln in str(lc).splitlines():
                lines.append("    " + ln)
        return "\n".join(lines) if lines else "0"


def _prefactor_str(p: AlgForm) -> str:
    if p == AlgForm():
        return "1"
    return str(p).replace("f[", "[").replace("t", "x")


# ---------------------------------------------------------------------------
# step table


@dataclass(frozen=True)
class Step:
    """``coef * P(x) * int_0^x word o c_n(t) kernel``; word letters may be mixed."""

    coef: Fraction
    prefactor: AlgForm
    word: tuple
    kernel: AlgForm


_F = AlgForm
W0 = Omega.W0


def _w(k: int, sign: int) -> Omega:
    return Omega.signed(k, sign)


def binomial_expand_step(family: Family, sign: int, kernel: Kernel, s: int) -> list[Step]:
    """Closed-form peel of one summation index.

    ``sign`` selects ``c^+`` or ``c^-`` (``c^-_n(x) = (-1)^n c_n(x)``). The returned
    identity sums over ``m`` with the kernel's natural inequality against ``n``.
    """
    if s < 1:
        raise ValueError("s must be positive")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    z = (W0,) * max(s - 2, 0)
    if family is Family.INVERSE_BINOMIAL_B:
        k1 = _w(1, sign).form
        f2 = _F(1, -1, 0) if sign > 0 else _F(1, 0, -1)
        f20 = _F(-1, -1, 0) if sign > 0 else _F(-1, 0, -1)
        w1, w3 = _w(1, sign), _w(3, sign)
        if kernel is Kernel.EVEN:
            if s == 1:
                return [Step(Fraction(sign), f2, (), k1)]
            return [Step(Fraction(sign), _F(), z + (w1,), k1)]
        if kernel is Kernel.ODD_PLUS:
            if s == 1:
                return [Step(Fraction(1), f20, (), k1)]
            return [Step(Fraction(1), _F(-1, 0, 0), z + (w3,), k1)]
        if s == 1:
            return [Step(Fraction(sign), _F(1, 0, 0), (w3,), k1), Step(Fraction(sign), f2, (), k1)]
        return [Step(Fraction(sign), _F(1, 0, 0), (MixedLetter(W0, 1),) + z + (w3,), k1)]

    zz = (W0,) * (s - 1)
    if sign > 0:
        K = _F(1, -3, 0)
        if kernel is Kernel.EVEN:
            return [Step(Fraction(1), _F(), zz, Omega.W2.form),
                    Step(Fraction(-1), _F(), zz + (Omega.W3,), K)]
        if kernel is Kernel.ODD_PLUS:
            return [Step(Fraction(1), _F(-1, 0, 0), zz, _F(0, -2, 0)),
                    Step(Fraction(-1), _F(-1, 0, 0), zz + (Omega.W1,), K)]
        if s == 1:
            return [Step(Fraction(1), _F(0, 1, 0), (), K)]
        return [Step(Fraction(1), _F(1, 0, 0), z + (_F(-2, 1, 0),), K)]
    K = _F(1, 0, -3)
    if kernel is Kernel.EVEN:
        return [Step(Fraction(1), _F(), zz + (Omega.Wm3,), K),
                Step(Fraction(-1), _F(), zz, Omega.Wm2.form)]
    if kernel is Kernel.ODD_PLUS:
        return [Step(Fraction(1), _F(-1, 0, 0), zz, _F(0, 0, -2)),
                Step(Fraction(1), _F(-1, 0, 0), zz + (Omega.Wm1,), K)]
    if s == 1:
        return [Step(Fraction(-1), _F(0, 0, 1), (), K)]
    # x -> ix in the non-alternating identity: ix * (-i) * (-1) = -x
    return [Step(Fraction(-1), _F(1, 0, 0), z + (_F(-2, 0, 1),), K)]


# ---------------------------------------------------------------------------
# strictness normalisation


def _partial_fractions(k1: Kernel, a: int, k2: Kernel, b: int) -> list[tuple[Fraction, Kernel, int]]:
    """1/(k1(n)^a k2(n)^b) as a sum of c / k(n)^e."""
    if k1 is k2:
        return [(Fraction(1), k1, a + b)]
    if a == 0:
        return [(Fraction(1), k2, b)] if b else []
    if b == 0:
        return [(Fraction(1), k1, a)]
    delta = k2.offset - k1.offset          # k2(n) - k1(n)
    out: dict[tuple[Kernel, int], Fraction] = {}
    # 1/(u^a v^b) = (1/delta) [1/(u^a v^(b-1)) - 1/(u^(a-1) v^b)]
    for c, k, e in _partial_fractions(k1, a, k2, b - 1):
        out[(k, e)] = out.get((k, e), 0) + c / delta
    for c, k, e in _partial_fractions(k1, a - 1, k2, b):
        out[(k, e)] = out.get((k, e), 0) - c / delta
    return [(c, k, e) for (k, e), c in out.items() if c]


@dataclass(frozen=True)
class _Scalar:
    """A single term c_n(x) * coef, i.e. coef * lead(n) * x^(2n)."""

    coef: Fraction
    n: int


def natural_terms(spec: SeriesSpec) -> list[tuple[Fraction, SeriesSpec | _Scalar]]:
    """Rewrite a series as a combination of series whose boundaries are all natural."""
    d = spec.depth
    for j in range(d):
        want, nat = spec.strict[j], spec.kernels[j].natural
        if want == nat:
            continue
        # sum_{>=} = sum_{>} + diagonal ; sum_{>} = sum_{>=} - diagonal
        sgn = Fraction(1) if nat == ">" else Fraction(-1)
        base = replace(spec, strict=spec.strict[:j] + (nat,) + spec.strict[j + 1:])
        out = natural_terms(base)
        for c, t in _diagonal(spec, j):
            out += [(sgn * c * c2, t2) for c2, t2 in natural_terms(t)] if isinstance(t, SeriesSpec) \
                else [(sgn * c, t)]
        return out
    return [(Fraction(1), spec)]


def _diagonal(spec: SeriesSpec, j: int) -> list[tuple[Fraction, SeriesSpec | _Scalar]]:
    """The part of the sum with n_j equal to its lower neighbour."""
    d = spec.depth
    if j == d - 1:
        n = spec.tail_n
        c = Fraction(spec.signs[-1] ** n, spec.kernels[-1](n) ** spec.s[-1])
        if d == 1:
            return [(c, _Scalar(Fraction(1), n))]
        sub = SeriesSpec(spec.family, spec.s[:-1], spec.signs[:-1], spec.kernels[:-1],
                         spec.strict[:-1], spec.x, n)
        return [(c, sub)]
    out = []
    for c, k, e in _partial_fractions(spec.kernels[j], spec.s[j], spec.kernels[j + 1], spec.s[j + 1]):
        sub = SeriesSpec(
            spec.family,
            spec.s[:j] + (e,) + spec.s[j + 2:],
            spec.signs[:j] + (spec.signs[j] * spec.signs[j + 1],) + spec.signs[j + 2:],
            spec.kernels[:j] + (k,) + spec.kernels[j + 2:],
            spec.strict[:j] + (spec.strict[j + 1],) + spec.strict[j + 2:],
            spec.x, spec.tail_n)
        out.append((c, sub))
    return out


# ---------------------------------------------------------------------------
# folding steps across the indices


def _fold(spec: SeriesSpec) -> list[tuple[Fraction, AlgForm, Word]]:
    """Natural-strictness series -> list of (coef, prefactor, plain word)."""
    eps = spec.cumulative_signs()
    states = [(s_.coef, s_.prefactor, s_.word, s_.kernel)
              for s_ in binomial_expand_step(spec.family, eps[0], spec.kernels[0], spec.s[0])]
    for j in range(1, spec.depth):
        steps = binomial_expand_step(spec.family, eps[j], spec.kernels[j], spec.s[j])
        states = [(c * st.coef, P, W + (as_letter(form_of(kap) * st.prefactor),) + st.word, st.kernel)
                  for c, P, W, kap in states for st in steps]
    out = []
    for c, P, W, kap in states:
        last = as_letter(kap) if spec.tail_n == 0 else TailForm(
            eps[-1], spec.tail_n, as_letter(kap), spec.family.value)
        for w, cw in expand_mixed(Word(W + (last,))).items():
            out.append((c * cw.coeffs[0], P, w))
    return out


def build_series_integral(spec: SeriesSpec, *, simplify: bool = True) -> IntegralExpr:
    """Integral representation whose value equals the series."""
    expr = IntegralExpr({}, spec.x)
    for c, t in natural_terms(spec):
        if isinstance(t, _Scalar):
            lead = spec.leading_coefficient(t.n) * t.coef * c
            expr.add(AlgForm(2 * t.n, 0, 0), LinComb.word((), lead))
            continue
        for c2, P, w in _fold(t):
            expr.add(P, LinComb({w: c * c2}))
    if simplify:
        expr = IntegralExpr({P: canonical(lc) for P, lc in expr.parts.items()}, expr.endpoint)
        expr.parts = {P: lc for P, lc in expr.parts.items() if len(lc)}
    _check_endpoint(expr)
    return expr


def _check_endpoint(expr: IntegralExpr) -> None:
    x = expr.endpoint
    if x.is_one():
        for P in expr.parts:
            if P.b2 < 0:
                raise UnsupportedCombination(
                    f"prefactor {_prefactor_str(P)} is singular at x = 1 (series diverges or needs a limit)")
            if P.b2 > 0:
                raise UnsupportedCombination(
                    f"prefactor {_prefactor_str(P)} vanishes at x = 1 against a divergent integral")
    if x.square == 0 and any(P.a < 0 for P in expr.parts):
        raise UnsupportedCombination("prefactor singular at x = 0")


# ---------------------------------------------------------------------------
# letter-level simplification


# int_0^t g = sum of (coefficient, monomial) for kernels with algebraic primitives vanishing at 0
_PRIMITIVES: dict[AlgForm, tuple[tuple[Fraction, AlgForm], ...]] = {
    AlgForm(1, 0, -3): ((Fraction(1), AlgForm()), (Fraction(-1), AlgForm(0, 0, -1))),
    AlgForm(1, -3, 0): ((Fraction(1), AlgForm(0, -1, 0)), (Fraction(-1), AlgForm())),
    AlgForm(1, -1, 0): ((Fraction(1), AlgForm()), (Fraction(-1), AlgForm(0, 1, 0))),
    AlgForm(1, 0, -1): ((Fraction(1), AlgForm(0, 0, 1)), (Fraction(-1), AlgForm())),
}


def resolve_composition(outer, inner) -> LinComb:
    """``outer o inner`` as single letters when ``inner`` has an algebraic primitive."""
    prims = _PRIMITIVES.get(form_of(inner))
    if prims is None:
        raise KeyError(f"no primitive for {inner}")
    f = form_of(outer)
    return LinComb({Word((as_letter(f * m),)): c for c, m in prims})


def canonical(lc: LinComb) -> LinComb:
    """Collapse innermost compositions with algebraic primitives and merge
    ``w[+-20] -+ w[+-2]`` into ``w[0]``."""
    out = LinComb()
    for w, c in lc.items():
        if len(w) >= 2 and isinstance(w[-1], (Omega, AlgForm)) and form_of(w[-1]) in _PRIMITIVES \
                and isinstance(w[-2], (Omega, AlgForm)):
            merged = resolve_composition(w[-2], w[-1])
            # keep the nested form when the pieces only converge together (t^-2 - t^-2 sqrt(1 - t^2))
            if all(form_of(u[-1]).a >= 0 for u in merged):
                out = out + merged.map_words(lambda u, pre=w[:-2]: LinComb.word(pre + u)).scale(c)
                continue
        out = out + LinComb({w: c})
    return _merge_twenty(out)


def _merge_twenty(lc: LinComb) -> LinComb:
    # w[20] - w[2] = w[0] and w[-20] + w[-2] = w[0], position by position
    pairs = ((Omega.W20, Omega.W2, -1), (Omega.Wm20, Omega.Wm2, 1))
    changed = True
    while changed:
        changed = False
        for w, c in list(lc.items()):
            for pos, letter in enumerate(w):
                for big, small, rel in pairs:
                    if letter is not big:
                        continue
                    partner = w[:pos] + Word((small,)) + w[pos + 1:]
                    if lc.get(partner) == c * rel:
                        zero = w[:pos] + Word((W0,)) + w[pos + 1:]
                        lc = lc - LinComb({w: c, partner: c * rel}) + LinComb({zero: c})
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return lc


# ---------------------------------------------------------------------------
# Gamma-block construction for even kernels


def inverse_binomial_word(s, eta, tail_n: int = 0, x=1) -> IntegralExpr:
    """Even-kernel family-b series from products of blocks ``G_s^{a,b}``.

    ``G_1^{a,b} = w_{3b-a}``, ``G_s^{a,b} = w_a w_0^{s-2} w_b``; the word is
    ``G_{s_1}^{e_0,e_1} ... G_{s_d}^{e_{d-1},e_d} o c^{e_d}_n w_{e_d}`` with cumulative
    signs ``e_j`` and ``e_0 = e_1``, scaled by ``prod_j e_j`` and by ``sqrt(1 - eta_1 x^2)``
    times the derivative, which removes the first letter.
    """
    s, eta = tuple(s), tuple(eta)
    spec = SeriesSpec(Family.INVERSE_BINOMIAL_B, s, eta, x=x, tail_n=tail_n)
    if (s[0], eta[0]) == (1, 1) and spec.x.is_one():
        raise UnsupportedCombination("sigma with (s1, eta1) = (1, 1) diverges at x = 1")
    eps = spec.cumulative_signs()
    e = (eps[0],) + eps
    letters: list = []
    for j, sj in enumerate(s):
        a, b = e[j], e[j + 1]
        if sj == 1:
            letters.append(Omega.signed(abs(3 * b - a), 1 if 3 * b - a > 0 else -1))
        else:
            letters += [Omega.signed(1, a)] + [W0] * (sj - 2) + [Omega.signed(1, b)]
    last = Omega.signed(1, eps[-1])
    letters.append(last if tail_n == 0 else TailForm(eps[-1], tail_n, last, "b"))
    sign = math.prod(eps)
    first = form_of(letters[0])
    root = AlgForm(0, 1, 0) if eta[0] > 0 else AlgForm(0, 0, 1)
    expr = IntegralExpr({}, spec.x)
    expr.add(first * root, LinComb.word(letters[1:], sign))
    _check_endpoint(expr)
    return expr


# ---------------------------------------------------------------------------
# hyperbolic words


class Hyp(enum.Enum):
    """Hyperbolic 1-forms in t, tagged with their image under u = sh t."""

    DT = Omega.Wm1
    TH = Omega.Wm2
    CTH = Omega.W0
    CSCH = Omega.Wm3
    CSCH2 = Omega.Wm20     # 2 csch(2t) dt
    SH = Omega.Wm5

    def __str__(self):
        return {"DT": "dt", "TH": "th", "CTH": "cth", "CSCH": "csch",
                "CSCH2": "2csch2", "SH": "sh"}[self.name]


class HypKind(enum.Enum):
    GTILDE = "g"
    HTILDE = "h"
    KTILDE = "k"


def _hyp_block(kind: HypKind, s: int) -> LinComb:
    mid = (Hyp.CTH,) * max(s - 2, 0)
    if kind is HypKind.GTILDE:
        return LinComb.word((Hyp.TH,)) if s == 1 else LinComb.word((Hyp.DT,) + mid + (Hyp.DT,))
    if kind is HypKind.HTILDE:
        return LinComb.word((Hyp.CSCH2,)) if s == 1 else LinComb.word((Hyp.CSCH,) + mid + (Hyp.CSCH,))
    if s == 1:
        return LinComb({Word((Hyp.SH, Hyp.CSCH)): -1, Word((Hyp.TH,)): -1})
    return LinComb.word((Hyp.SH, MixedLetter(Hyp.CTH, 1)) + mid + (Hyp.CSCH,), -1)


def hyperbolic_word(kind: HypKind, s) -> LinComb:
    """The hyperbolic word for ``s`` (without the final ``c_n(i sh t) dt`` letter)."""
    s = tuple(s)
    if not s:
        raise ValueError("composition must be nonempty")
    out = LinComb.word(())
    for sj in s:
        out = out.concat(_hyp_block(kind, sj))
    return out


def hyp_to_omega(w: LinComb) -> LinComb:
    """Substitute u = sh t letter by letter and expand mixed constants."""

    def conv(letter):
        if isinstance(letter, MixedLetter):
            return MixedLetter(conv(letter.form), letter.constant)
        if isinstance(letter, Hyp):
            return letter.value
        return letter

    return w.map_words(lambda word: expand_mixed(Word(conv(l) for l in word)))


# value at y of each hyperbolic density, as a monomial in x = sh y
_HYP_AT = {Hyp.DT: AlgForm(), Hyp.TH: AlgForm(1, 0, -1), Hyp.CTH: AlgForm(-1, 0, 1),
           Hyp.CSCH: AlgForm(-1, 0, 0), Hyp.CSCH2: AlgForm(-1, 0, -1), Hyp.SH: AlgForm(1, 0, 0)}


def hyperbolic_integral(kind: HypKind, s, x, tail_n: int = 0) -> IntegralExpr:
    """Series at argument ``i sh y`` (family b, kernels 2n, 2n+1 with >=, or 2n-1) with ``x = sh y``.

    The derivative in y removes the first letter, whose density at y becomes the
    prefactor; the final ``b_n(i sh t) dt`` becomes ``b^-_n(u) w[-1]``.
    """
    s = tuple(s)
    # the 2n-1 variant carries no (-1)^d: y -> iy turns sin, tan into -sh, -th and the
    # final i dt cancels the -i from d/d(iy); the signs live in the k-blocks themselves
    sign = (-1) ** len(s) if kind is HypKind.GTILDE else 1
    last = Omega.Wm1 if tail_n == 0 else TailForm(-1, tail_n, Omega.Wm1, "b")
    expr = IntegralExpr({}, RealArg.parse(x))
    for w, c in hyperbolic_word(kind, s).items():
        first, rest = w[0], w[1:]
        if isinstance(first, MixedLetter):
            raise ValueError("leading letter cannot carry a constant")
        body = expand_mixed(Word(tuple(l.value if isinstance(l, Hyp) else
                                       MixedLetter(l.form.value, l.constant) for l in rest) + (last,)))
        expr.add(_HYP_AT[first], body.scale(c * sign))
    return expr


def hyperbolic_spec(kind: HypKind, s, x, tail_n: int = 0) -> SeriesSpec:
    """The real series equal to the hyperbolic one at ``i sh y`` (x = sh y): flip eta_1."""
    s = tuple(s)
    d = len(s)
    signs = (-1,) + (1,) * (d - 1)
    if kind is HypKind.GTILDE:
        return SeriesSpec(Family.INVERSE_BINOMIAL_B, s, signs, x=x, tail_n=tail_n)
    if kind is HypKind.HTILDE:
        return SeriesSpec(Family.INVERSE_BINOMIAL_B, s, signs, (Kernel.ODD_PLUS,) * d,
                          (">=",) * d, x=x, tail_n=tail_n)
    return SeriesSpec(Family.INVERSE_BINOMIAL_B, s, signs, (Kernel.ODD_MINUS,) * d, x=x, tail_n=tail_n)
