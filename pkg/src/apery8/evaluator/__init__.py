"""Numerical evaluation of iterated integrals, polylogarithms and named constants."""
from .constants import Constant, constant
from .core import (DEFAULT_PRECISION, EvalConfig, EvalResult, Engine, PathSpec, eval_expr,
                   eval_omega_lincomb, eval_omega_word, eval_xlincomb, eval_xword, omega_divergence)
from .engine import Arc, EvaluationError, Segment
from .mpl import MPLTerm, mpl_series, word_to_mpl

__all__ = ["DEFAULT_PRECISION", "EvalConfig", "EvalResult", "Engine", "PathSpec", "eval_expr",
           "eval_omega_lincomb", "eval_omega_word", "eval_xlincomb", "eval_xword", "omega_divergence",
           "Arc", "Segment", "EvaluationError", "MPLTerm", "mpl_series", "word_to_mpl",
           "Constant", "constant"]
