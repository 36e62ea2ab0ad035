"""Words over the omega and X alphabets, linear combinations, shuffles and path reversal."""
from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .forms import AlgForm, Omega
from .numfield import ONE, ZERO, CycloQ8, root_exponent, root_of_unity

__all__ = [
    "XLetter", "MixedLetter", "TailForm", "Word", "LinComb",
    "A", "x", "shuffle", "expand_mixed", "reverse_path", "AlphabetMismatch",
    "IllFormedWord", "alphabet_of",
]


class AlphabetMismatch(ValueError):
    pass


class IllFormedWord(ValueError):
    pass


@dataclass(frozen=True)
class XLetter:
    """``dt/t`` when ``pole`` is None, otherwise ``dt/(pole - t)``.

    Poles are exact CycloQ8 values when they are roots of unity (or any exact
    field element), and plain complex numbers after rescaling by a
    transcendental endpoint.
    """

    pole: CycloQ8 | complex | None = None

    @property
    def is_zero(self) -> bool:
        return self.pole is None

    def pole_value(self) -> complex:
        if self.pole is None:
            return 0j
        return complex(self.pole)

    def __str__(self):
        if self.pole is None:
            return "x[0]"
        if isinstance(self.pole, CycloQ8):
            e = root_exponent(self.pole)
            if e is not None:
                return {0: "x[1]", 4: "x[-1]", 2: "x[i]", 6: "x[-i]"}.get(e, f"x[mu^{e}]")
            return f"x[{self.pole}]"
        return f"x[{self.pole:.12g}]"

    __repr__ = __str__


A = XLetter(None)


def x(e: int) -> XLetter:
    """The letter dt/(mu^e - t)."""
    return XLetter(root_of_unity(e))


@dataclass(frozen=True)
class TailForm:
    """``c_n^{sign}(t) * base`` for the innermost letter of an n-tail.

    ``family`` "b": ``c_n = (+-4t^2)^n / binom(2n, n)``; "a": ``c_n = binom(2n, n) (+-t^2)^n / 4^n``.
    """

    sign: int
    n: int
    base: object
    family: str = "b"

    def coefficient(self) -> Fraction:
        """Rational factor multiplying t^(2n)."""
        c = Fraction(math.comb(2 * self.n, self.n), 4 ** self.n)
        c = 1 / c if self.family == "b" else c
        return c * self.sign ** self.n

    def __str__(self):
        s = "+" if self.sign > 0 else "-"
        return f"{self.family}{s}[{self.n}]{self.base}"


@dataclass(frozen=True)
class MixedLetter:
    """The extended letter ``(form + constant)``; a zero constant is a plain letter."""

    form: object
    constant: CycloQ8 = ZERO

    def __post_init__(self):
        object.__setattr__(self, "constant", CycloQ8.coerce(self.constant))

    def __str__(self):
        if self.constant.is_zero():
            return str(self.form)
        return f"({self.form} + {self.constant})"


def alphabet_of(letter) -> str:
    if isinstance(letter, MixedLetter):
        return alphabet_of(letter.form)
    if isinstance(letter, XLetter):
        return "X"
    if isinstance(letter, (Omega, AlgForm, TailForm)):
        return "Omega"
    return "other"


class Word(tuple):
    """An iterated-integral word; the first letter is outermost."""

    def __new__(cls, letters: Iterable = ()):
        return super().__new__(cls, tuple(letters))

    def __add__(self, other):
        return Word(tuple(self) + tuple(other))

    def __getitem__(self, item):
        r = super().__getitem__(item)
        return Word(r) if isinstance(item, slice) else r

    def alphabet(self) -> str | None:
        kinds = {alphabet_of(l) for l in self}
        if len(kinds) > 1:
            raise AlphabetMismatch(f"word mixes alphabets: {self}")
        return kinds.pop() if kinds else None

    def __str__(self):
        return " ".join(str(l) for l in self) if self else "1"

    def __repr__(self):
        return f"Word({str(self)!r})"


class LinComb(Mapping):
    """Finitely supported map Word -> CycloQ8 with no stored zeros."""

    __slots__ = ("_d",)

    def __init__(self, data=None):
        d: dict[Word, CycloQ8] = {}
        if data:
            items = data.items() if isinstance(data, Mapping) else data
            for w, c in items:
                w = Word(w)
                c = CycloQ8.coerce(c)
                v = d.get(w, ZERO) + c
                if v.is_zero():
                    d.pop(w, None)
                else:
                    d[w] = v
        self._d = d

    @classmethod
    def word(cls, letters, coeff=ONE) -> LinComb:
        return cls({Word(letters): coeff})

    def __getitem__(self, w):
        return self._d[w]

    def __iter__(self) -> Iterator[Word]:
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __add__(self, other: LinComb) -> LinComb:
        out = dict(self._d)
        for w, c in other.items():
            v = out.get(w, ZERO) + c
            if v.is_zero():
                out.pop(w, None)
            else:
                out[w] = v
        r = LinComb()
        r._d = out
        return r

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other: LinComb) -> LinComb:
        return self + (-other)

    def scale(self, c) -> LinComb:
        c = CycloQ8.coerce(c)
        if c.is_zero():
            return LinComb()
        r = LinComb()
        r._d = {w: v * c for w, v in self._d.items()}
        return r

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def concat(self, other: LinComb) -> LinComb:
        """Bilinear concatenation: (sum a_u u)(sum b_v v) = sum a_u b_v uv."""
        return LinComb((u + v, a * b) for u, a in self.items() for v, b in other.items())

    def map_words(self, fn) -> LinComb:
        """Apply ``fn: Word -> LinComb`` linearly."""
        return LinComb((u, a * c) for w, c in self.items() for u, a in fn(w).items())

    def __eq__(self, other):
        if isinstance(other, LinComb):
            return self._d == other._d
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._d.items()))

    def __str__(self):
        if not self._d:
            return "0"
        lines = []
        for w, c in sorted(self._d.items(), key=lambda kv: (len(kv[0]), str(kv[0]))):
            lines.append(f"({c}) {w}")
        return "\n".join(lines)

    def __repr__(self):
        return f"LinComb({len(self)} terms)"


def shuffle(w1, w2) -> LinComb:
    """Sum over all interleavings of w1 and w2 that keep each word's order."""
    w1, w2 = Word(w1), Word(w2)
    kinds = {alphabet_of(l) for l in w1} | {alphabet_of(l) for l in w2}
    if len(kinds) > 1:
        raise AlphabetMismatch(f"cannot shuffle {w1} with {w2}")
    n, m = len(w1), len(w2)
    counts: dict[Word, int] = {}
    for pos in combinations(range(n + m), n):
        sel = set(pos)
        it1, it2 = iter(w1), iter(w2)
        w = Word(next(it1) if k in sel else next(it2) for k in range(n + m))
        counts[w] = counts.get(w, 0) + 1
    return LinComb({w: c for w, c in counts.items()})


def shuffle_lin(u: LinComb, v: LinComb) -> LinComb:
    return LinComb((w, a * b * c) for w1, a in u.items() for w2, b in v.items()
                   for w, c in shuffle(w1, w2).items())


def expand_mixed(w) -> LinComb:
    """Expand a word of mixed letters ``(f dt + c)`` into plain words.

    ``(f dt + c) o g dt o rest`` becomes ``f dt o g dt o rest + c * (g dt o rest)``,
    applied to every letter.
    """
    w = Word(w)
    if not w:
        return LinComb.word(())
    last = w[-1]
    if isinstance(last, MixedLetter) and not last.constant.is_zero():
        raise IllFormedWord(f"last letter {last} carries a constant")
    out = LinComb.word(())
    # right to left: every prefix grows by the plain form, plus c times dropping it
    for letter in reversed(w):
        if isinstance(letter, MixedLetter):
            form, c = letter.form, letter.constant
        else:
            form, c = letter, ZERO
        grown = LinComb({Word((form,)) + u: a for u, a in out.items()})
        if not c.is_zero():
            grown = grown + out.scale(c)
        out = grown
    return out


def reverse_path(w) -> tuple[int, Word]:
    """Orientation reversal: integral over p->q of w is sign times q->p of reversed w."""
    w = Word(w)
    return (-1) ** len(w), Word(reversed(w))
