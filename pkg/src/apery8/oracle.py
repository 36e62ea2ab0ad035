"""Ground truth by direct summation.

Nothing here touches iterated integrals: series are summed term by term from
their definitions with inner sums kept as running accumulators. On the unit
circle, where the outer terms decay only algebraically, the limit is read off
from partial sums fitted to their asymptotic expansion, separately for even
and odd cut-offs; the disagreement of the two fits is the error estimate.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath

from .evaluator.core import EvalConfig, EvalResult, Engine
from .series_builder import Family, SeriesSpec

__all__ = ["mhs", "tsum", "partial_sums", "sum_series", "alt_zeta", "cvz_alternating",
           "leshchiner_check", "LeshchinerResult", "OracleError"]


class OracleError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# finite nested sums


def _nested(s, n: int, star: bool, den) -> Fraction:
    # inner[k] = sum over the last few indices with the outermost of them <= k
    d = len(s)
    if d == 0:
        return Fraction(1)
    prev = [Fraction(1)] * (n + 1)       # empty product for every bound
    for j in range(d - 1, -1, -1):
        cur = [Fraction(0)] * (n + 1)
        acc = Fraction(0)
        for k in range(1, n + 1):
            below = prev[k] if star else prev[k - 1]
            if j == d - 1:
                below = Fraction(1)
            acc += below / Fraction(den(k)) ** s[j]
            cur[k] = acc
        prev = cur
    return prev[n]


def mhs(s, n: int, star: bool = False) -> Fraction:
    """zeta_n(s) = sum_{n >= n_1 > ... > n_d > 0} 1/prod n_j^{s_j} (>= throughout when star)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _nested(tuple(s), n, star, lambda k: k)


def tsum(s, n: int, star: bool = False) -> Fraction:
    """t_n(s): as mhs with odd denominators 2 n_j - 1."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _nested(tuple(s), n, star, lambda k: 2 * k - 1)


# ---------------------------------------------------------------------------
# series partial sums


def partial_sums(spec: SeriesSpec, N: int, prec: int = 120, x=None) -> list:
    """S_0..S_N where S_M sums all terms with n_1 <= M."""
    ctx = mpmath.mp.clone() if hasattr(mpmath.mp, "clone") else mpmath.mp
    with mpmath.workprec(prec):
        xv = spec.x.value(prec) if x is None else mpmath.mpmathify(x)
        x2 = xv * xv
        d = spec.depth
        lo = spec.tail_n
        # f[j](n) = sum over indices j+1.. with n_{j} = n fixed; computed incrementally in n
        accs = [mpmath.mpf(0)] * d     # running sum of g_{j}(m) for m below the current n
        sums = []
        total = mpmath.mpf(0)
        c = mpmath.mpf(1)
        family_b = spec.family is Family.INVERSE_BINOMIAL_B
        xpow = mpmath.mpf(1)
        for n in range(0, N + 1):
            if n > 0:
                c = c * (2 * n) / (2 * n - 1) if family_b else c * (2 * n - 1) / (2 * n)
                xpow *= x2
                if n == 50:
                    _spot_check(c, family_b, prec)
            # g_j(n) for j = d-1 .. 0 uses accs[j+1] (strict) or accs[j+1] + g_{j+1}(n) (weak)
            g_next = None
            for j in range(d - 1, -1, -1):
                if j == d - 1:
                    ok = n > lo if spec.strict[j] == ">" else n >= lo
                    inner = mpmath.mpf(1) if ok else mpmath.mpf(0)
                else:
                    inner = accs[j + 1] + (g_next if spec.strict[j] == ">=" else 0)
                l = spec.kernels[j](n)
                if inner == 0:
                    g = mpmath.mpf(0)
                else:
                    if l == 0:
                        raise OracleError(f"kernel vanishes at n = {n}")
                    g = inner * (spec.signs[j] ** n) / mpmath.mpf(l) ** spec.s[j]
                if j < d - 1:
                    accs[j + 1] += g_next
                g_next = g
            accs[0] += g_next
            total += c * xpow * g_next
            sums.append(total)
        return sums


def _spot_check(c, family_b: bool, prec: int) -> None:
    """Compare the recurrence value of b_50 or a_50 with the exact rational."""
    exact = Fraction(4 ** 50, math.comb(100, 50))
    if not family_b:
        exact = 1 / exact
    ref = mpmath.mpf(exact.numerator) / exact.denominator
    if abs(c - ref) > abs(ref) * mpmath.mpf(2) ** (24 - prec):
        raise OracleError(f"coefficient recurrence drifted: {c} vs {ref}")


def _fit_limit(sums, ns, exps, logs: int, prec: int):
    """Least-squares fit S_n ~ S + sum c_{k,j} n^{e_k} log^j n over the sample ns."""
    with mpmath.workprec(prec):
        rows, rhs = [], []
        for n in ns:
            nn = mpmath.mpf(n)
            ln = mpmath.log(nn)
            row = [mpmath.mpf(1)]
            for e in exps:
                base = nn ** e
                for j in range(logs + 1):
                    row.append(base * ln ** j)
            rows.append(row)
            rhs.append(sums[n])
        A = mpmath.matrix(rows)
        b = mpmath.matrix(rhs)
        # column scaling keeps the normal equations well conditioned
        ncol = A.cols
        scales = [max(abs(A[i, k]) for i in range(A.rows)) or 1 for k in range(ncol)]
        for i in range(A.rows):
            for k in range(ncol):
                A[i, k] /= scales[k]
        sol, _res = mpmath.qr_solve(A, b)
        return sol[0]


def sum_series(spec: SeriesSpec, cfg: EvalConfig | None = None, *, target: float = 1e-18,
               max_terms: int = 24000, prec: int = 160) -> EvalResult:
    """The series value by direct summation, with an error estimate.

    ``cfg`` only raises the working precision; the summation itself is tuned by
    ``target`` and ``max_terms``.
    """
    if cfg is not None:
        prec = max(prec, cfg.precision + 60)
    xv = spec.x.value(prec)
    x2 = float(xv * xv)
    p_tail = (1.5 if spec.family is Family.INVERSE_BINOMIAL_B else 0.5) - spec.s[0]
    if x2 < 1 - 1e-12:
        # geometric decay: terms ~ n^k x^(2n)
        rho = max(x2, 1e-300)
        need = int(math.log(target * 1e-6) / math.log(rho)) + 40 if rho > 0 else 10
        N = min(max(need, 20), 200000) + spec.tail_n
        S = partial_sums(spec, N, prec)
        err = float(abs(S[-1] - S[-1 - max(1, N // 10)])) * rho ** 2 + 2.0 ** (10 - prec)
        return EvalResult(mpmath.mpc(S[-1]), max(err, 2.0 ** (10 - prec)), Engine.DIRECT_SUM)
    if p_tail >= 0 and spec.signs[0] == 1:
        raise OracleError(f"{spec.label()} diverges")
    N = max_terms
    S = partial_sums(spec, N, prec)
    logs = spec.depth - 1
    estimates = []
    for K in (7, 9):
        exps = [p_tail - k for k in range(K)] if spec.signs[0] == 1 else \
            [p_tail - 1 - k for k in range(K)]
        unknowns = 1 + K * (logs + 1)
        for parity in (0, 1):
            lo_n = max(400, N // 40)
            ms = sorted({int(round(lo_n * (N / lo_n) ** (i / (3 * unknowns)))) for i in range(3 * unknowns + 1)})
            ns = [m - (m % 2) + parity for m in ms if m - (m % 2) + parity <= N]
            estimates.append(_fit_limit(S, ns, exps, logs, prec))
    best = estimates[-2:]
    val = (best[0] + best[1]) / 2
    spread = max(abs(e - val) for e in estimates)
    return EvalResult(mpmath.mpc(val), float(spread) + 2.0 ** (10 - prec), Engine.DIRECT_SUM)


# ---------------------------------------------------------------------------
# alternating sums


def cvz_alternating(terms) -> mpmath.mpf:
    """sum_{k>=0} (-1)^k a_k from a_0..a_{n-1} (Cohen, Rodriguez Villegas, Zagier)."""
    n = len(terms)
    d = (3 + mpmath.sqrt(8)) ** n
    d = (d + 1 / d) / 2
    b = mpmath.mpf(-1)
    c = -d
    s = mpmath.mpf(0)
    for k in range(n):
        c = b - c
        s += c * terms[k]
        b = b * (k + n) * (k - n) / ((k + mpmath.mpf(1) / 2) * (k + 1))
    return s / d


def alt_zeta(n: int, prec: int = 120) -> EvalResult:
    """zeta(n bar) = sum_{k>=1} (-1)^k / k^n by accelerated direct summation."""
    with mpmath.workprec(prec + 20):
        m = int(prec * 0.45) + 10
        terms = [mpmath.mpf(1) / mpmath.mpf(k + 1) ** n for k in range(m)]
        v = -cvz_alternating(terms)
        v2 = -cvz_alternating(terms[: m - 8])
    return EvalResult(mpmath.mpc(v), float(abs(v - v2)) + 2.0 ** (4 - prec), Engine.DIRECT_SUM)


# ---------------------------------------------------------------------------
# Leshchiner-type identities


def _coef(j: int, kind: str, reading: str) -> Fraction:
    if reading == "bernoulli":
        from mpmath import bernoulli
        return Fraction(str(mpmath.mpf(bernoulli(j))))  # B_1 = -1/2, B_2 = 1/6, ...
    if kind == "A":
        return Fraction(3, 4) if j == 1 else Fraction(1)
    return Fraction(5, 4) if j == 1 else Fraction(1)


@lru_cache(maxsize=None)
def _hs_table(p: int, N: int, odd: bool) -> tuple:
    """zeta_{n-1}(2_p) for n = 0..N (or t_n(2_p) when odd), exact, by recursion on p."""
    if p == 0:
        return tuple([Fraction(1)] * (N + 1))
    prev = _hs_table(p - 1, N, odd)
    out = [Fraction(0)] * (N + 1)
    acc = Fraction(0)
    for n in range(N + 1):
        if odd:
            if n >= 1:
                acc += prev[n - 1] / Fraction((2 * n - 1) ** 2)
            out[n] = acc
        else:
            # zeta_{n-1}(2_p) = sum_{m <= n-1} zeta_{m-1}(2_{p-1}) / m^2
            if n >= 2:
                acc += prev[n - 1] / Fraction((n - 1) ** 2)
            out[n] = acc
    return tuple(out)


class LeshchinerResult(tuple):
    """(lhs, rhs, |lhs - rhs|), with the truncation tail estimate in ``tail``."""

    def __new__(cls, lhs, rhs, diff, tail: float):
        self = super().__new__(cls, (lhs, rhs, diff))
        self.tail = tail
        return self

    lhs = property(lambda self: self[0])
    rhs = property(lambda self: self[1])
    diff = property(lambda self: self[2])


def leshchiner_check(k: int, variant: int, N_terms: int = 2000, *, reading: str = "displayed",
                     prec: int = 120) -> LeshchinerResult:
    """(lhs, rhs, |lhs - rhs|) for one of the four identities, truncated after N_terms.

    ``reading`` chooses the A_j, B_j coefficients: "displayed" (1 -+ delta_{j,1}/4)
    or "bernoulli". Variant 1 compares against sum (-1)^(n-1)/n^(2k) = -zeta(2k bar);
    variant 3 uses (2n+1)^(2j-1) for the n^(2j-1) of the display.
    """
    if k < 1 or variant not in (1, 2, 3, 4):
        raise ValueError("k >= 1 and variant in 1..4")
    with mpmath.workprec(prec):
        if variant == 1:
            lhs = -alt_zeta(2 * k, prec).value.real
        elif variant == 2:
            lhs = mpmath.zeta(2 * k + 1)
        elif variant == 3:
            # sum_{n>=0} (-1)^n/(2n+1)^(2k-1), accelerated
            m = int(prec * 0.45) + 10
            lhs = cvz_alternating([mpmath.mpf(1) / mpmath.mpf(2 * i + 1) ** (2 * k - 1) for i in range(m)])
        else:
            lhs = (1 - mpmath.mpf(2) ** (-2 * k)) * mpmath.zeta(2 * k)
        rhs = _leshchiner_rhs(k, variant, N_terms, reading)
        return LeshchinerResult(lhs, rhs[0], abs(lhs - rhs[0]), rhs[1])


def _leshchiner_rhs(k: int, variant: int, N: int, reading: str):
    odd = variant in (3, 4)
    kind = "A" if variant in (1, 3) else "B"
    tables = {p: _hs_table(p, N, odd) for p in range(k)}
    total = mpmath.mpf(0)
    last = mpmath.mpf(0)
    start = 0 if odd else 1
    binom = mpmath.mpf(1)
    for n in range(start, N + 1):
        if n > 0:
            binom = binom * (2 * (2 * n - 1)) / n
        inner = mpmath.mpf(0)
        for j in range(1, k + 1):
            c = _coef(j, kind, reading)
            h = tables[k - j][n]
            if not h:
                continue
            if variant in (1, 2):
                den = mpmath.mpf(n) ** (2 * j - 2)
            elif variant == 3:
                den = mpmath.mpf(2 * n + 1) ** (2 * j - 1)
            else:
                den = mpmath.mpf(2 * n + 1) ** (2 * j)
            inner += mpmath.mpf(c.numerator) / c.denominator * (-1) ** (k - j) * \
                mpmath.mpf(h.numerator) / h.denominator / den
        if variant == 1:
            term = 2 / (mpmath.mpf(n) ** 2 * binom) * inner
        elif variant == 2:
            term = 2 * (-1) ** (n - 1) / (mpmath.mpf(n) ** 3 * binom) * inner
        elif variant == 3:
            term = binom / mpmath.mpf(16) ** n * inner
        else:
            term = (-1) ** n * binom / mpmath.mpf(16) ** n * inner
        total += term
        last = term
    # terms decay like 4^{-n}: the tail is about a third of the last term
    return total, float(abs(last)) / 3
