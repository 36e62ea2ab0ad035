"""Changes of variables that turn Omega words into words in dt/t and dt/(xi - t), xi^8 = 1.

LEVEL8 substitutes t = sqrt(2) u / sqrt(1 + u^4), which keeps [0, 1] fixed.
CAYLEY substitutes t = i (1 - u^2) / (1 + u^2); real t = tan(theta) corresponds to
u = e^(i theta), so [0, x] becomes the unit-circle arc from 1 to e^(i arctan x).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import mpmath

from .evaluator.core import PathSpec
from .forms import AlgForm, Omega
from .numfield import MU, ONE, SQRT2, CycloQ8, root_of_unity
from .words import A, LinComb, Word, x

__all__ = ["RewriteTable", "LEVEL8", "CAYLEY", "DomainError", "rewrite_word", "rewrite_lincomb",
           "endpoint_level8", "endpoint_cayley", "image_path", "named", "d"]


class DomainError(ValueError):
    """A letter has no image under the chosen table."""


def _lc(*pairs) -> LinComb:
    return LinComb((Word((letter,)), c) for c, letter in pairs)


_ODD = (1, 3, 5, 7)
_HALF = CycloQ8(0) + ONE / 2


def _sum_odd(coef) -> LinComb:
    return _lc(*((coef(e), x(e)) for e in _ODD))


def d(e1: int, e2: int) -> LinComb:
    """x_{mu^e1} - x_{mu^e2}."""
    return _lc((ONE, x(e1)), (-ONE, x(e2)))


_X1, _XM1, _XI, _XMI = x(0), x(4), x(2), x(6)

y = _lc((ONE, _XMI), (ONE, _XI), (-ONE, _XM1), (-ONE, _X1))
z = _lc((-ONE, A), (-ONE, _XMI), (-ONE, _XI))
c = _lc((2 * ONE, _XM1), (-ONE, _XI), (-ONE, _XMI))
e = _lc((ONE, A), (2 * ONE, _XM1))


def named() -> dict[str, LinComb]:
    """The recurring one-letter combinations of the circle rewrite."""
    return {"y": y, "z": z, "c": c, "e": e}


def _level8_images() -> dict[Omega, LinComb]:
    q = SQRT2 / 4
    half_sum = _sum_odd(lambda k: _HALF)
    imgs = {
        Omega.W0: _lc((ONE, A)) + half_sum,
        Omega.W1: _sum_odd(lambda k: q * (root_of_unity(k) + root_of_unity(3 * k))),
        Omega.Wm1: _sum_odd(lambda k: q * (root_of_unity(k) - root_of_unity(3 * k))),
        Omega.W2: _lc((ONE, _X1), (ONE, _XM1)) - half_sum,
        Omega.Wm2: half_sum - _lc((ONE, _XI), (ONE, _XMI)),
        Omega.W4: _sum_odd(lambda k: _HALF * root_of_unity(2 * k)),
    }
    # omega_{+-20} = omega_0 +- omega_{+-2}
    imgs[Omega.W20] = imgs[Omega.W0] + imgs[Omega.W2]
    imgs[Omega.Wm20] = imgs[Omega.W0] - imgs[Omega.Wm2]
    return imgs


def _cayley_images() -> dict[Omega, LinComb]:
    return {
        Omega.W0: y,
        Omega.Wm1: d(2, 6),
        Omega.Wm2: -z,
        Omega.Wm3: d(4, 0),
        Omega.Wm20: y + z,
    }


def _prec():
    return mpmath.workprec(max(mpmath.mp.prec, 128))


def _num(xv):
    # RealArg carries its own exact value
    return xv.value(160) if hasattr(xv, "value") and callable(xv.value) else mpmath.mpmathify(xv)


def endpoint_level8(xv) -> mpmath.mpf:
    """The t in [0, 1] with sqrt(2) t / sqrt(1 + t^4) = x."""
    with _prec():
        return _endpoint_level8(_num(xv))


def _endpoint_level8(xv):
    if not 0 <= xv <= 1:
        raise ValueError("endpoint_level8 needs 0 <= x <= 1")
    if xv == 0:
        return mpmath.mpf(0)
    if xv == 1:
        return mpmath.mpf(1)
    x2 = xv * xv
    # t^2 = (1 - sqrt(1 - x^4)) / x^2 = x^2 / (1 + sqrt(1 - x^4)), the second form without cancellation
    return mpmath.sqrt(x2 / (1 + mpmath.sqrt((1 - x2) * (1 + x2))))


def endpoint_cayley(xv) -> mpmath.mpc:
    """lambda(x) = sqrt((1 + i x)/(1 - i x)) = e^(i arctan x)."""
    with _prec():
        xv = _num(xv)
        if not 0 <= xv <= 1:
            raise ValueError("endpoint_cayley needs 0 <= x <= 1")
        return mpmath.expj(mpmath.atan(xv))


@dataclass(frozen=True)
class RewriteTable:
    name: str
    images: dict = field(repr=False)
    endpoint_map: object = field(repr=False)
    start: complex = 0           # image of t = 0

    @property
    def domain(self) -> frozenset:
        return frozenset(self.images)

    def image(self, letter) -> LinComb:
        key = letter.omega if isinstance(letter, AlgForm) else letter
        if key not in self.images:
            raise DomainError(f"{letter} has no {self.name} image")
        return self.images[key]

    def exact_endpoint(self, xv):
        """The image of x = 1 as an exact field element, else None."""
        if xv != 1:
            return None
        return ONE if self.name == "LEVEL8" else MU


LEVEL8 = RewriteTable("LEVEL8", _level8_images(), endpoint_level8, 0)
CAYLEY = RewriteTable("CAYLEY", _cayley_images(), endpoint_cayley, 1)


def image_path(table: RewriteTable, xv) -> PathSpec:
    """The path carrying the rewritten words: a segment for LEVEL8, an arc for CAYLEY."""
    with _prec():
        if table is CAYLEY:
            return PathSpec.arc(0, mpmath.atan(_num(xv)))
        return PathSpec.straight(0, endpoint_level8(xv))


def rewrite_word(table: RewriteTable, w, xv=1) -> tuple[LinComb, object]:
    """The X-word combination equal to the Omega word on [0, x], and the image of x.

    The image path starts at ``table.start``.
    """
    out = LinComb.word(())
    for letter in Word(w):
        out = out.concat(table.image(letter))
    return out, table.endpoint_map(xv)


def rewrite_lincomb(table: RewriteTable, lc: LinComb, xv=1) -> tuple[LinComb, object]:
    return lc.map_words(lambda w: rewrite_word(table, w, xv)[0]), table.endpoint_map(xv)
