"""Adaptive evaluation of Omega-word and X-word integrals."""
from __future__ import annotations

import enum
import functools
import os
from dataclasses import dataclass

import mpmath

from ..forms import AlgForm, Omega
from ..numfield import CycloQ8
from ..words import LinComb, TailForm, Word, XLetter
from .engine import Arc, EvaluationError, Path, Segment, integrate_terms

DEFAULT_PRECISION = 64


def _env_precision() -> int:
    raw = os.environ.get("APERY_PRECISION_BITS")
    if not raw:
        return DEFAULT_PRECISION
    try:
        bits = int(raw)
    except ValueError as exc:
        raise ValueError(f"APERY_PRECISION_BITS must be an integer, got {raw!r}") from exc
    if not 53 <= bits <= 212:
        raise ValueError("APERY_PRECISION_BITS must lie in [53, 212]")
    return bits


class Engine(enum.Enum):
    ODE_CASCADE = "ode-cascade"
    MPL_SERIES = "mpl-series"
    CONSTANT = "constant"
    DIRECT_SUM = "direct-sum"


@dataclass(frozen=True)
class EvalConfig:
    target_abs_error: float = 1e-15
    working_precision: int = 0      # 0: take APERY_PRECISION_BITS or the default
    max_steps: int = 4              # panel doublings
    singular_margin: float = 4.5    # half-width of the mapped parameter interval
    nodes: int = 20
    panels: int = 12

    @property
    def precision(self) -> int:
        return self.working_precision or _env_precision()

    def __post_init__(self):
        if self.target_abs_error < 2.0 ** (4 - self.precision):
            object.__setattr__(self, "target_abs_error", 2.0 ** (4 - self.precision))


@dataclass(frozen=True)
class EvalResult:
    value: mpmath.mpc
    abs_error_estimate: float
    engine: Engine

    @property
    def real(self):
        return self.value.real

    def __add__(self, other: EvalResult) -> EvalResult:
        return EvalResult(self.value + other.value, self.abs_error_estimate + other.abs_error_estimate,
                          self.engine if self.engine == other.engine else Engine.ODE_CASCADE)

    def scale(self, c) -> EvalResult:
        c = mpmath.mpmathify(c)
        return EvalResult(self.value * c, self.abs_error_estimate * float(abs(c)), self.engine)

    def __str__(self):
        v = self.value
        body = mpmath.nstr(v.real, 20) if abs(v.imag) <= self.abs_error_estimate else mpmath.nstr(v, 20)
        return f"{body} +- {self.abs_error_estimate:.1e} [{self.engine.value}]"


def _working_precision(fn):
    """Run ``fn`` with mpmath at least 20 bits above the configured precision."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        cfg = kwargs.get("cfg") or next((a for a in args if isinstance(a, EvalConfig)), None) or EvalConfig()
        with mpmath.workprec(max(mpmath.mp.prec, cfg.precision + 20)):
            return fn(*args, **kwargs)

    return wrapper


def _half_width(prec: int, cfg: EvalConfig) -> float:
    # the truncated tails must stay below 2^-prec even for (1-t)^(-1/2) integrands
    return max(cfg.singular_margin, 4.5 + 0.5 * max(0, prec - 64) / 64)


def refine(terms, path: Path, cfg: EvalConfig, complex_: bool) -> EvalResult:
    """Integrate at doubling panel counts until two successive values agree."""
    prec = cfg.precision
    hw = _half_width(prec, cfg)
    P = cfg.panels
    prev = integrate_terms(terms, path, prec, npanel=P, m=cfg.nodes, half_width=hw, complex_=complex_)
    scale = 1 + abs(prev)
    for _ in range(cfg.max_steps):
        P *= 2
        cur = integrate_terms(terms, path, prec, npanel=P, m=cfg.nodes, half_width=hw, complex_=complex_)
        err = float(abs(cur - prev))
        floor = float(scale) * 2.0 ** (6 - prec)
        if err <= max(cfg.target_abs_error, floor):
            return EvalResult(cur, max(err, floor), Engine.ODE_CASCADE)
        prev = cur
    raise EvaluationError(f"no convergence: last change {err:.3g} exceeds target {cfg.target_abs_error:.3g}")


# ---------------------------------------------------------------------------
# Omega words on [0, x]


def _laurent(letter, order: int) -> dict:
    if isinstance(letter, Omega):
        return letter.form.laurent_at_zero(order)
    if isinstance(letter, AlgForm):
        return letter.laurent_at_zero(order)
    if isinstance(letter, TailForm):
        c = letter.coefficient()
        return {k + 2 * letter.n: v * c for k, v in _laurent(letter.base, order).items()}
    raise EvaluationError(f"{letter!r} is not an Omega letter")


def _leading_order(combo) -> int | None:
    """Lowest power of t in sum c * letter near 0 (None if it vanishes to the probed order)."""
    acc: dict = {}
    for c, letter in combo:
        for k, v in _laurent(letter, 8).items():
            acc[k] = acc.get(k, 0) + CycloQ8.coerce(c) * v
    live = [k for k, v in acc.items() if not CycloQ8.coerce(v).is_zero()]
    return min(live) if live else None


def omega_divergence(lc: LinComb) -> str | None:
    """Why an Omega combination diverges at 0, or None.

    Words sharing a prefix are judged together, since their last letters are
    integrated as one density.
    """
    groups: dict = {}
    for w, c in lc.items():
        if len(w):
            groups.setdefault(tuple(w[:-1]), []).append((c, w[-1]))
    for prefix, combo in groups.items():
        lead = _leading_order(combo)
        if lead is None:
            continue
        order = lead + 1
        if order <= 0:
            return f"last letters after {Word(prefix)} diverge at 0"
        for letter in reversed(prefix):
            order += _leading_order([(1, letter)]) + 1
            if order <= 0:
                return f"divergent at 0 at letter {letter} of {Word(prefix)}"
    return None


def _real_endpoint(x):
    if hasattr(x, "value") and callable(x.value):
        return x.value(200)
    return mpmath.mpmathify(x)


@_working_precision
def eval_omega_lincomb(lc: LinComb, x, cfg: EvalConfig | None = None) -> EvalResult:
    cfg = cfg or EvalConfig()
    xv = _real_endpoint(x)
    if not (0 <= xv <= 1):
        raise EvaluationError("Omega words are evaluated for 0 <= x <= 1")
    why = omega_divergence(lc)
    if why:
        raise EvaluationError(why)
    terms = [(c, w) for w, c in lc.items()]
    if xv == 0:
        const = sum((c for w, c in lc.items() if not len(w)), CycloQ8())
        return EvalResult(mpmath.mpc(const.embed(cfg.precision + 10)), 0.0, Engine.ODE_CASCADE)
    return refine(terms, Segment(0, xv), cfg, complex_=False)


def eval_omega_word(w, x, cfg: EvalConfig | None = None) -> EvalResult:
    return eval_omega_lincomb(LinComb.word(Word(w)), x, cfg)


@_working_precision
def eval_expr(expr, cfg: EvalConfig | None = None) -> EvalResult:
    """Value of an IntegralExpr from the series builder."""
    cfg = cfg or EvalConfig()
    total = EvalResult(mpmath.mpc(0), 0.0, Engine.ODE_CASCADE)
    for P, lc in expr.parts.items():
        pv = expr.prefactor_value(P, cfg.precision + 20)
        total = total + eval_omega_lincomb(lc, expr.endpoint, cfg).scale(pv)
    return total.scale(expr.overall_scalar.embed(cfg.precision + 20))


# ---------------------------------------------------------------------------
# X words along paths


@dataclass(frozen=True)
class PathSpec:
    """Contiguous pieces (Segment or Arc), traversed in order."""

    pieces: tuple

    @classmethod
    def straight(cls, a, b) -> PathSpec:
        return cls((Segment(a, b),))

    @classmethod
    def arc(cls, theta0, theta1) -> PathSpec:
        return cls((Arc(theta0, theta1),))

    @property
    def start(self) -> complex:
        return self.pieces[0].start

    @property
    def end(self) -> complex:
        return self.pieces[-1].end


def _letter_pole(letter: XLetter):
    return 0 if letter.pole is None else letter.pole_value()


def xword_divergence(word, start: complex, end: complex) -> str | None:
    if not word:
        return None
    if not isinstance(word[0], XLetter) or not isinstance(word[-1], XLetter):
        raise EvaluationError(f"{word} is not an X word")
    tol = 1e-12
    if abs(_letter_pole(word[0]) - end) < tol:
        return "divergent at the upper endpoint"
    if abs(_letter_pole(word[-1]) - start) < tol:
        return "divergent at the lower endpoint"
    return None


@_working_precision
def eval_xlincomb(lc: LinComb, path: PathSpec, cfg: EvalConfig | None = None) -> EvalResult:
    """Sum of coefficient * iterated integral along ``path``."""
    cfg = cfg or EvalConfig()
    for w in lc:
        why = xword_divergence(w, path.start, path.end)
        if why:
            raise EvaluationError(f"word {w}: {why}")
    if len(path.pieces) == 1:
        return refine([(c, w) for w, c in lc.items()], path.pieces[0], cfg, complex_=True)
    # Chen: outer letters live on the later pieces
    head = PathSpec(path.pieces[:-1])
    last = PathSpec(path.pieces[-1:])
    total = EvalResult(mpmath.mpc(0), 0.0, Engine.ODE_CASCADE)
    for w, c in lc.items():
        cv = c.embed(cfg.precision + 10)
        for k in range(len(w) + 1):
            outer = _plain_eval(w[:k], last, cfg)
            inner = _plain_eval(w[k:], head, cfg)
            total = total + EvalResult(cv * outer.value * inner.value,
                                       float(abs(cv)) * (outer.abs_error_estimate * float(abs(inner.value))
                                                         + inner.abs_error_estimate * float(abs(outer.value))),
                                       Engine.ODE_CASCADE)
    return total


def _plain_eval(w, path: PathSpec, cfg) -> EvalResult:
    if not w:
        return EvalResult(mpmath.mpc(1), 0.0, Engine.ODE_CASCADE)
    return eval_xlincomb(LinComb.word(w), path, cfg)


def eval_xword(w, path: PathSpec, cfg: EvalConfig | None = None) -> EvalResult:
    return eval_xlincomb(LinComb.word(Word(w)), path, cfg)
