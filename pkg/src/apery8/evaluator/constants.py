"""Named transcendental constants."""
from __future__ import annotations

import enum
import threading

import mpmath

from .core import EvalConfig, EvalResult, Engine

__all__ = ["Constant", "constant"]


class Constant(enum.Enum):
    PI = "pi"
    LOG2 = "log 2"
    LOG_NU = "log(1 + sqrt 2)"
    ZETA3 = "zeta(3)"
    CATALAN = "G"
    LI2_NU_INV = "Li2(sqrt2 - 1)"
    LI3_NU_INV = "Li3(sqrt2 - 1)"
    LI3_INV_SQRT2 = "Li3(1/sqrt2)"
    L3_CHI8 = "L(3, chi_8)"
    IM_LI3_HALF_1_PLUS_I = "Im Li3((1 + i)/2)"


def _l3_chi8():
    # chi_8 = +1 on 1, 7 and -1 on 3, 5 (mod 8); Hurwitz zeta by Euler-Maclaurin inside mpmath
    z = mpmath.zeta
    return (z(3, mpmath.mpf(1) / 8) - z(3, mpmath.mpf(3) / 8) - z(3, mpmath.mpf(5) / 8)
            + z(3, mpmath.mpf(7) / 8)) / 512


_FORMULAS = {
    Constant.PI: lambda: +mpmath.pi,
    Constant.LOG2: lambda: mpmath.log(2),
    Constant.LOG_NU: lambda: mpmath.log(1 + mpmath.sqrt(2)),
    Constant.ZETA3: lambda: mpmath.zeta(3),
    Constant.CATALAN: lambda: +mpmath.catalan,
    Constant.LI2_NU_INV: lambda: mpmath.polylog(2, mpmath.sqrt(2) - 1),
    Constant.LI3_NU_INV: lambda: mpmath.polylog(3, mpmath.sqrt(2) - 1),
    Constant.LI3_INV_SQRT2: lambda: mpmath.polylog(3, 1 / mpmath.sqrt(2)),
    Constant.L3_CHI8: _l3_chi8,
    Constant.IM_LI3_HALF_1_PLUS_I: lambda: mpmath.im(mpmath.polylog(3, mpmath.mpc(1, 1) / 2)),
}

_cache: dict = {}
_lock = threading.Lock()


def constant(name, cfg: EvalConfig | None = None) -> EvalResult:
    """Value of a named constant; ``name`` is a Constant or its member name."""
    cfg = cfg or EvalConfig()
    if isinstance(name, str):
        try:
            name = Constant[name.upper()]
        except KeyError:
            raise KeyError(f"unknown constant {name!r}") from None
    prec = cfg.precision + 20
    key = (name, prec)
    hit = _cache.get(key)
    if hit is None:
        with _lock:
            hit = _cache.get(key)
            if hit is None:
                with mpmath.workprec(prec + 10):
                    hit = mpmath.mpmathify(_FORMULAS[name]())
                _cache[key] = hit
    return EvalResult(mpmath.mpc(hit), 2.0 ** (-cfg.precision), Engine.CONSTANT)
