"""Iterated integrals by an ODE cascade on double-exponentially mapped panels.

A word ``f_1 ... f_k`` along a path is evaluated as ``G_0 = 1``,
``G_j' = f_{k-j+1} G_{j-1}`` integrated from the start of the path. The path
parameter ``s`` in (0, 1) is mapped by ``s = 1/(1 + exp(-pi sinh u))`` so that
algebraic and logarithmic endpoint singularities become double-exponentially
decaying integrands in ``u``. Each panel in ``u`` carries Gauss-Legendre nodes
and a spectral integration matrix, so every intermediate ``G_j`` is known at
the same nodes to full order.

Two backends share the code: ``numpy.longdouble`` (64-bit mantissa) and
mpmath object arrays for any larger precision.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from ..forms import AlgForm, Omega
from ..numfield import CycloQ8
from ..words import TailForm, XLetter


class EvaluationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# backends


class Backend:
    """Array arithmetic at a fixed working precision."""

    def __init__(self, prec: int):
        self.prec = prec
        self.native = prec <= 64
        if self.native:
            self.real = np.longdouble
            self.cplx = np.clongdouble
            self.sqrt = np.sqrt
            self.exp = np.exp
            self.log = np.log
            self.eps = float(np.finfo(np.longdouble).eps)
        else:
            self.real = object
            self.cplx = object
            self.sqrt = np.frompyfunc(lambda v: _mpctx(prec).sqrt(v), 1, 1)
            self.exp = np.frompyfunc(lambda v: _mpctx(prec).exp(v), 1, 1)
            self.log = np.frompyfunc(lambda v: _mpctx(prec).log(v), 1, 1)
            self.eps = 2.0 ** (1 - prec)

    # scalar conversion
    def num(self, v):
        """Convert an mpmath/int/Fraction/complex/CycloQ8 scalar to the backend."""
        if isinstance(v, CycloQ8):
            v = v.embed(max(self.prec, 53) + 20)
        if isinstance(v, Fraction):
            v = _mpctx(self.prec + 20).mpf(v.numerator) / v.denominator
        if self.native:
            if isinstance(v, (mpmath.mpc, complex)) or (hasattr(v, "imag") and v.imag != 0):
                v = mpmath.mpc(v)
                return self.cplx(self.real(mpmath.nstr(v.real, 25)) + 1j * self.real(mpmath.nstr(v.imag, 25)))
            v = mpmath.mpf(v) if not isinstance(v, (int, np.longdouble)) else v
            return self.real(mpmath.nstr(v, 25)) if isinstance(v, mpmath.mpf) else self.real(v)
        ctx = _mpctx(self.prec)
        if isinstance(v, (complex, mpmath.mpc)):
            return ctx.mpc(v)
        return ctx.mpf(v)

    def array(self, values, complex_=False):
        if self.native:
            return np.array(values, dtype=self.cplx if complex_ else self.real)
        return np.array(values, dtype=object)

    def to_mp(self, v):
        if not self.native:
            return v
        if np.iscomplexobj(v):
            v = np.clongdouble(v)
            return mpmath.mpc(mpmath.mpf(repr_ld(v.real)), mpmath.mpf(repr_ld(v.imag)))
        return mpmath.mpf(repr_ld(np.longdouble(v)))


def repr_ld(v) -> str:
    return np.format_float_scientific(np.longdouble(v), precision=21, unique=False)


_MP_LOCK = threading.Lock()
_MP_CTX: dict[int, mpmath.ctx_mp.MPContext] = {}


def _mpctx(prec: int):
    ctx = _MP_CTX.get(prec)
    if ctx is None:
        with _MP_LOCK:
            ctx = _MP_CTX.get(prec)
            if ctx is None:
                ctx = mpmath.MPContext()
                ctx.prec = prec
                _MP_CTX[prec] = ctx
    return ctx


# ---------------------------------------------------------------------------
# Gauss-Legendre panels with spectral integration matrices


@lru_cache(maxsize=None)
def _legendre_rule(m: int, prec: int):
    """Nodes x, weights w and matrix S[i,k] = int_{-1}^{x_i} l_k for m-point Gauss-Legendre."""
    ctx = _mpctx(prec + 30)
    xs, ws = [], []
    for i in range(1, m + 1):
        x = ctx.cos(ctx.pi * (i - ctx.mpf(1) / 4) / (m + ctx.mpf(1) / 2))
        for _ in range(100):
            p0, p1 = ctx.mpf(1), x
            for k in range(2, m + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = m * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < ctx.mpf(2) ** (-(prec + 25)):
                break
        p0, p1 = ctx.mpf(1), x
        for k in range(2, m + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = m * (x * p1 - p0) / (x * x - 1)
        xs.append(x)
        ws.append(2 / ((1 - x * x) * dp * dp))
    xs = xs[::-1]
    ws = ws[::-1]

    def legendre_all(x):
        P = [ctx.mpf(1), x]
        for k in range(2, m + 2):
            P.append(((2 * k - 1) * x * P[-1] - (k - 1) * P[-2]) / k)
        return P

    PX = [legendre_all(x) for x in xs]
    S = []
    for i in range(m):
        row = []
        Pi = PX[i]
        for k in range(m):
            Pk = PX[k]
            acc = (xs[i] + 1) / 2
            for j in range(1, m):
                acc += Pk[j] * (Pi[j + 1] - Pi[j - 1]) / 2
            row.append(ws[k] * acc)
        S.append(row)
    return xs, ws, S


@dataclass
class Grid:
    """Quadrature nodes on the mapped parameter line; shared by all letters of a cascade."""

    backend: Backend
    s: np.ndarray        # path parameter in (0,1), shape (P, m)
    sc: np.ndarray       # 1 - s, accurate near 1
    dsdu: np.ndarray     # ds/du
    S: np.ndarray        # (m, m) integration matrix, scaled to panel width
    w: np.ndarray        # (m,) panel weights, scaled
    npanel: int
    m: int


@lru_cache(maxsize=64)
def make_grid(npanel: int, m: int, prec: int, half_width: float) -> Grid:
    be = Backend(prec)
    xs, ws, S = _legendre_rule(m, max(prec, 64))
    ctx = _mpctx(max(prec, 64) + 20)
    L = ctx.mpf(half_width)
    h = 2 * L / npanel
    s_rows, sc_rows, d_rows = [], [], []
    for p in range(npanel):
        a = -L + p * h
        srow, scrow, drow = [], [], []
        for x in xs:
            u = a + (x + 1) * h / 2
            q = ctx.pi * ctx.sinh(u)
            if q > 0:
                e = ctx.exp(-q)
                s_, sc_ = 1 / (1 + e), e / (1 + e)
            else:
                e = ctx.exp(q)
                s_, sc_ = e / (1 + e), 1 / (1 + e)
            srow.append(be.num(s_))
            scrow.append(be.num(sc_))
            drow.append(be.num(ctx.pi * ctx.cosh(u) * s_ * sc_))
        s_rows.append(srow)
        sc_rows.append(scrow)
        d_rows.append(drow)
    Sm = be.array([[be.num(v * h / 2) for v in row] for row in S])
    wv = be.array([be.num(v * h / 2) for v in ws])
    return Grid(be, be.array(s_rows), be.array(sc_rows), be.array(d_rows), Sm, wv, npanel, m)


def cumulative(grid: Grid, g: np.ndarray) -> tuple[np.ndarray, object]:
    """Running integral of ``g`` (already multiplied by ds/du) and its total."""
    within = g @ grid.S.T            # (P, m)
    totals = g @ grid.w              # (P,)
    offs = np.cumsum(totals)
    start = np.concatenate([grid.backend.array([grid.backend.num(0)], np.iscomplexobj(g)), offs[:-1]]) \
        if grid.backend.native else np.concatenate([np.array([0], dtype=object), offs[:-1]])
    return within + start[:, None], offs[-1]


# ---------------------------------------------------------------------------
# paths


class Path:
    """A parametrised path t = gamma(s), s in [0,1]."""

    start: complex
    end: complex

    def points(self, grid: Grid):
        """Return (t, dt/ds) at the grid nodes."""
        raise NotImplementedError

    def diff(self, grid: Grid, pole, t):
        """pole - t, computed without cancellation when the pole is an endpoint."""
        raise NotImplementedError

    @property
    def is_real(self) -> bool:
        return False


def _close(a: complex, b: complex) -> bool:
    return abs(complex(a) - complex(b)) < 1e-30 * (1 + abs(complex(a)))


class Segment(Path):
    """Straight segment from ``start`` to ``end`` (exact values are kept as mpmath numbers)."""

    def __init__(self, start, end):
        self.start_mp = mpmath.mpmathify(start)
        self.end_mp = mpmath.mpmathify(end)
        self.start = complex(self.start_mp)
        self.end = complex(self.end_mp)

    @property
    def is_real(self):
        return self.start.imag == 0 and self.end.imag == 0

    def points(self, grid):
        be = grid.backend
        if self.is_real:
            a, d = be.num(mpmath.re(self.start_mp)), be.num(mpmath.re(self.end_mp - self.start_mp))
        else:
            a, d = be.num(mpmath.mpc(self.start_mp)), be.num(mpmath.mpc(self.end_mp - self.start_mp))
        return a + d * grid.s, d + 0 * grid.s

    def diff(self, grid, pole, t):
        be = grid.backend
        if _close(pole, self.end):
            d = self.end_mp - self.start_mp
            return be.num(mpmath.mpc(d) if not self.is_real else mpmath.re(d)) * grid.sc
        if _close(pole, self.start):
            d = self.end_mp - self.start_mp
            return -be.num(mpmath.mpc(d) if not self.is_real else mpmath.re(d)) * grid.s
        return be.num(pole) - t

    def one_minus(self, grid, t):
        """1 - t along a real segment, accurate when the end is 1."""
        if self.end == 1:
            d = self.end_mp - self.start_mp
            return grid.backend.num(mpmath.re(d)) * grid.sc
        return 1 - t

    def __repr__(self):
        return f"Segment({self.start}, {self.end})"


class Arc(Path):
    """Unit-circle arc t = exp(i theta), theta from theta0 to theta1."""

    def __init__(self, theta0, theta1):
        self.th0 = mpmath.mpf(theta0)
        self.th1 = mpmath.mpf(theta1)
        self.start = complex(mpmath.expj(self.th0))
        self.end = complex(mpmath.expj(self.th1))

    def points(self, grid):
        be = grid.backend
        if be.native:
            th0 = be.num(self.th0)
            dth = be.num(self.th1 - self.th0)
            th = th0 + dth * grid.s
            t = np.cos(th) + 1j * np.sin(th)
            t = t.astype(np.clongdouble)
            return t, 1j * dth * t
        ctx = _mpctx(be.prec)
        th = np.frompyfunc(lambda s: ctx.mpf(self.th0) + (ctx.mpf(self.th1) - ctx.mpf(self.th0)) * s, 1, 1)(grid.s)
        t = np.frompyfunc(ctx.expj, 1, 1)(th)
        return t, t * ctx.mpc(0, 1) * (ctx.mpf(self.th1) - ctx.mpf(self.th0))

    def diff(self, grid, pole, t):
        be = grid.backend
        # e^{ia} - e^{ib} = 2i sin((a-b)/2) e^{i(a+b)/2}
        for theta, frac in ((self.th1, grid.sc), (self.th0, grid.s)):
            if _close(pole, complex(mpmath.expj(theta))):
                sgn = 1 if theta is self.th1 else -1
                dth = be.num(self.th1 - self.th0)
                if be.native:
                    half = sgn * dth * frac / 2
                    th = be.num(theta)
                    return (2j * np.sin(half) * np.exp(1j * (th - half))).astype(np.clongdouble)
                ctx = _mpctx(be.prec)
                f = np.frompyfunc(
                    lambda fr: 2j * ctx.sin(sgn * dth * fr / 2) * ctx.expj(ctx.mpf(theta) - sgn * dth * fr / 2), 1, 1)
                return f(frac)
        return be.num(pole) - t

    def __repr__(self):
        return f"Arc({float(self.th0)}, {float(self.th1)})"


# ---------------------------------------------------------------------------
# letter densities (times dt/ds)


class SumLetter(tuple):
    """A linear combination of letters at one position: tuple of (coefficient, letter)."""

    def __str__(self):
        return "(" + " + ".join(f"{c}*{l}" for c, l in self) + ")"


def _power(base, k):
    if k == 0:
        return 1
    return base ** k


def letter_density(letter, grid: Grid, path: Path, t, dtds, cache: dict):
    key = letter
    hit = cache.get(key)
    if hit is not None:
        return hit
    be = grid.backend
    if isinstance(letter, SumLetter):
        out = 0
        for c, l in letter:
            out = out + be.num(c) * letter_density(l, grid, path, t, dtds, cache)
    elif isinstance(letter, XLetter):
        if letter.pole is None:
            out = dtds / t
        else:
            pole = letter.pole.embed(be.prec + 10) if isinstance(letter.pole, CycloQ8) else letter.pole
            out = dtds / path.diff(grid, pole, t)
    elif isinstance(letter, (Omega, AlgForm)):
        if not (isinstance(path, Segment) and path.is_real):
            raise EvaluationError("omega letters are evaluated on real segments only")
        f = letter.form if isinstance(letter, Omega) else letter
        omt = path.one_minus(grid, t)
        out = dtds * _power(t, f.a) if f.a else dtds
        if f.b2:
            out = out * _power(be.sqrt(omt * (1 + t)), f.b2)
        if f.c2:
            out = out * _power(be.sqrt(1 + t * t), f.c2)
    elif isinstance(letter, TailForm):
        out = be.num(letter.coefficient()) * _power(t, 2 * letter.n) * letter_density(letter.base, grid, path, t, dtds, cache)
    else:
        raise EvaluationError(f"cannot evaluate letter {letter!r}")
    cache[key] = out
    return out


# ---------------------------------------------------------------------------
# cascade over a linear combination of words


def group_last_letters(terms):
    """Merge words sharing a prefix into one word whose last letter is a SumLetter.

    ``terms`` is an iterable of (coefficient, word). Returns (constant, list of (1, word)).
    """
    const = 0
    groups: dict[tuple, list] = {}
    for c, w in terms:
        if len(w) == 0:
            const += complex(c) if not isinstance(c, CycloQ8) else c
            continue
        groups.setdefault(tuple(w[:-1]), []).append((c, w[-1]))
    merged = []
    for prefix, lst in groups.items():
        merged.append(prefix + (SumLetter(tuple(lst)),))
    return const, merged


def cascade_values(words, path: Path, grid: Grid, complex_: bool):
    """Integral of each word along ``path``, sharing common suffixes."""
    be = grid.backend
    t, dtds = path.points(grid)
    dens_cache: dict = {}
    node_cache: dict = {}
    dsdu = grid.dsdu

    def G(suffix: tuple):
        # suffix is innermost-first
        if not suffix:
            return None
        hit = node_cache.get(suffix)
        if hit is not None:
            return hit
        parent = G(suffix[:-1])
        f = letter_density(suffix[-1], grid, path, t, dtds, dens_cache) * dsdu
        g = f if parent is None else f * parent[0]
        res = cumulative(grid, g)
        node_cache[suffix] = res
        return res

    out = []
    for w in words:
        out.append(G(tuple(reversed(w)))[1] if len(w) else be.num(1))
    return out


def integrate_terms(terms, path: Path, prec: int, *, npanel: int, m: int, half_width: float,
                    complex_: bool):
    """Sum of c * integral(word) for (c, word) in terms at one grid resolution (mpmath result)."""
    grid = make_grid(npanel, m, prec, half_width)
    const, merged = group_last_letters(terms)
    vals = cascade_values(merged, path, grid, complex_)
    total = mpmath.mpc(0)
    for v in vals:
        total += grid.backend.to_mp(v)
    if const:
        total += mpmath.mpmathify(const if not isinstance(const, CycloQ8) else const.embed(prec + 10))
    return total
