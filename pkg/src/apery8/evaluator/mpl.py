"""Multiple polylogarithms as nested series, and the words they come from."""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np

from ..numfield import ONE, CycloQ8, root_exponent
from ..words import Word, XLetter
from .core import EvalConfig, EvalResult, Engine
from .engine import EvaluationError

__all__ = ["MPLTerm", "word_to_mpl", "mpl_series"]


@dataclass(frozen=True)
class MPLTerm:
    """Li_{s_1..s_d}(y_1..y_d) = sum_{n_1 > ... > n_d > 0} prod y_j^{n_j} / n_j^{s_j}."""

    s: tuple
    args: tuple          # CycloQ8 when exact, else complex

    @property
    def depth(self) -> int:
        return len(self.s)

    def arg_values(self, prec: int):
        return [a.embed(prec) if isinstance(a, CycloQ8) else mpmath.mpc(a) for a in self.args]

    def __str__(self):
        def show(a):
            if isinstance(a, CycloQ8):
                e = root_exponent(a)
                return {0: "1", 4: "-1", 2: "i", 6: "-i"}.get(e, f"mu^{e}") if e is not None else str(a)
            return f"{a:.12g}"
        return f"Li_{{{','.join(map(str, self.s))}}}({', '.join(show(a) for a in self.args)})"


def _ratio(p, q):
    if isinstance(p, CycloQ8) and isinstance(q, CycloQ8):
        return p * q.inverse()
    return complex(p) / complex(q)


def word_to_mpl(w, z=ONE) -> list[tuple[CycloQ8, MPLTerm]]:
    """integral_0^z of a convergent X word as one polylogarithm.

    a^{s_1-1} x_{xi_1} ... a^{s_d-1} x_{xi_d} gives Li_s(z/xi_1, xi_1/xi_2, ..., xi_{d-1}/xi_d).
    """
    w = Word(w)
    if not w:
        return [(ONE, MPLTerm((), ()))]
    if w[-1].pole is None:
        raise EvaluationError(f"{w} diverges at 0")
    s, poles, run = [], [], 0
    for letter in w:
        if not isinstance(letter, XLetter):
            raise EvaluationError(f"{letter} is not an X letter")
        run += 1
        if letter.pole is not None:
            s.append(run)
            poles.append(letter.pole)
            run = 0
    args = [_ratio(z, poles[0])] + [_ratio(poles[j - 1], poles[j]) for j in range(1, len(poles))]
    if s[0] == 1 and (args[0] == ONE if isinstance(args[0], CycloQ8) else abs(args[0] - 1) < 1e-14):
        raise EvaluationError(f"{w} diverges at the upper endpoint")
    return [(ONE, MPLTerm(tuple(s), tuple(args)))]


def _partial_sums(term: MPLTerm, N: int, prec: int):
    """S_1..S_N of the outer index, accumulated in mpmath at ``prec`` bits."""
    with mpmath.workprec(prec):
        ys = term.arg_values(prec)
        d = term.depth
        inner = None
        for j in range(d - 1, -1, -1):
            y = ys[j]
            pw = [mpmath.mpc(1)] * (N + 1)
            for k in range(1, N + 1):
                pw[k] = pw[k - 1] * y
            terms = [pw[k] / mpmath.mpf(k) ** term.s[j] for k in range(1, N + 1)]
            if inner is not None:
                # strictly smaller inner index: shift the cumulative inner sums by one
                terms = [terms[k] * (inner[k - 1] if k else 0) for k in range(N)]
            acc, cum = mpmath.mpc(0), []
            for t in terms:
                acc += t
                cum.append(acc)
            inner = cum
        return inner


def mpl_series(term: MPLTerm, cfg: EvalConfig | None = None, *, max_terms: int = 6000) -> EvalResult:
    """Nested-series value of a polylogarithm with all |y_j| <= 1.

    Inside the unit disc the outer sum is truncated once terms fall below the
    target. On the circle the partial sums are split by residue of the outer
    index modulo the order of the arguments (8 for the level-8 alphabet); in each
    class they have a smooth expansion in N^-k log^j N, which is fitted and
    extrapolated. The spread between classes is the error estimate; if it
    exceeds the target the evaluation fails rather than return an untrusted value.
    """
    cfg = cfg or EvalConfig()
    prec = max(cfg.precision, 64) + 40
    with mpmath.workprec(prec):
        ys = term.arg_values(prec)
        if any(abs(y) > 1 + mpmath.mpf(2) ** (-prec // 2) for y in ys):
            raise EvaluationError("arguments must satisfy |y| <= 1")
        if not term.s:
            return EvalResult(mpmath.mpc(1), 0.0, Engine.MPL_SERIES)
        if term.s[0] == 1 and abs(ys[0] - 1) < mpmath.mpf(2) ** (-prec // 2):
            raise EvaluationError("Li with (s_1, y_1) = (1, 1) diverges")
        r = float(abs(ys[0]))
        if r < 0.95:
            # geometric: terms ~ r^N N^(d-1)
            N = int((cfg.precision * 0.7 + 10) / -np.log10(max(r, 1e-30))) + 10
            S = _partial_sums(term, N, prec)
            err = float(abs(S[-1] - S[-2])) * 10 + 2.0 ** (8 - cfg.precision)
            return EvalResult(S[-1], err, Engine.MPL_SERIES)
        return _boundary(term, ys, cfg, prec, max_terms)


def _period(ys) -> int:
    # arguments are roots of unity of order dividing 8 in all uses; fall back to 1
    for q in (1, 2, 4, 8):
        if all(abs(y ** q - 1) < 1e-20 or abs(y) < 1 - 1e-12 for y in ys):
            return q
    return 0


def _boundary(term, ys, cfg, prec, N):
    q = _period(ys)
    if not q:
        raise EvaluationError("boundary arguments must be roots of unity of order dividing 8")
    S = _partial_sums(term, N, prec)
    logs = term.depth - 1 + sum(1 for y in ys[1:] if abs(y - 1) < 1e-20)
    K = 6
    exps = [-k for k in range(1, K + 1)]
    ests = []
    for res in range(q):
        ns = [n for n in range(N // 10, N + 1) if n % q == res]
        ns = ns[:: max(1, len(ns) // (4 * K * (logs + 1)))]
        rows = []
        for n in ns:
            L = mpmath.log(n)
            rows.append([mpmath.mpf(1)] + [(mpmath.mpf(n) / N) ** e * L ** j for e in exps for j in range(logs + 1)])
        A = mpmath.matrix(rows)
        # column scaling; the constant column keeps scale 1
        for k in range(1, A.cols):
            sc = max(abs(A[i, k]) for i in range(A.rows)) or 1
            for i in range(A.rows):
                A[i, k] /= sc
        b = mpmath.matrix([S[n - 1] for n in ns])
        try:
            sol, _ = mpmath.qr_solve(A, b)
        except ValueError as exc:
            raise EvaluationError(f"series acceleration failed: {exc}") from exc
        ests.append(sol[0])
    mean = sum(ests) / len(ests)
    spread = float(max(abs(e - mean) for e in ests)) if len(ests) > 1 else 0.0
    err = max(spread * 10, 2.0 ** (8 - cfg.precision))
    if err > max(cfg.target_abs_error, 1e-9):
        raise EvaluationError(f"series acceleration did not reach the target (spread {spread:.2g})")
    return EvalResult(mean, err, Engine.MPL_SERIES)
