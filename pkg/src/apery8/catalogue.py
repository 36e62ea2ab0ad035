"""The checked-in table of printed values and closed forms, and a small evaluator for the latter."""
from __future__ import annotations

import ast
import json
import operator
from dataclasses import dataclass, field
from decimal import Decimal
from importlib import resources

import mpmath

from .evaluator.constants import constant
from .evaluator.core import EvalConfig
from .series_builder import SeriesSpec

__all__ = ["CatalogueRow", "load_catalogue", "eval_closed_form", "printed_tolerance", "CLOSED_FORM_TOL"]

CLOSED_FORM_TOL = 1e-11

_CONSTANTS = {
    "pi": "PI", "log2": "LOG2", "lognu": "LOG_NU", "zeta3": "ZETA3", "catalan": "CATALAN",
    "li2nu": "LI2_NU_INV", "li3nu": "LI3_NU_INV", "li3s": "LI3_INV_SQRT2", "L3chi8": "L3_CHI8",
    "imli3": "IM_LI3_HALF_1_PLUS_I",
}
_DERIVED = {
    "sqrt2": lambda: mpmath.sqrt(2),
    "nu": lambda: 1 + mpmath.sqrt(2),
}
_FUNCS = {"sqrt": mpmath.sqrt, "log": mpmath.log, "exp": mpmath.exp, "atan": mpmath.atan}
_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}


def eval_closed_form(text: str, variables: dict | None = None, cfg: EvalConfig | None = None):
    """Value of an arithmetic expression over the named constants.

    ``^`` is accepted for powers. Only numbers, the names in the constant table,
    ``variables``, + - * / ^ and sqrt/log/exp/atan calls are allowed.
    """
    cfg = cfg or EvalConfig()
    variables = variables or {}
    tree = ast.parse(text.replace("^", "**"), mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            # integer literals stay exact so 9/8 is not rounded to a double
            return mpmath.mpf(node.value) if isinstance(node.value, int) else mpmath.mpf(repr(node.value))
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Name):
            if node.id in variables:
                return mpmath.mpf(variables[node.id])
            if node.id in _CONSTANTS:
                return constant(_CONSTANTS[node.id], cfg).value.real
            if node.id in _DERIVED:
                return _DERIVED[node.id]()
            raise ValueError(f"unknown name {node.id!r} in closed form")
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS:
            if node.keywords or len(node.args) != 1:
                raise ValueError(f"{node.func.id} takes one argument")
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError(f"unsupported syntax in closed form: {ast.dump(node)[:60]}")

    with mpmath.workprec(cfg.precision + 30):
        return +ev(tree)


def printed_tolerance(printed: str, ulps: int = 5) -> float:
    """``ulps`` units in the last printed digit."""
    exp = Decimal(printed).as_tuple().exponent
    return ulps * 10.0 ** exp


@dataclass(frozen=True)
class CatalogueRow:
    id: str
    group: str
    anchor: str
    spec: SeriesSpec
    paper: str | None = None
    closed_form: str | None = None
    variables: dict = field(default_factory=dict)
    note: str | None = None

    @property
    def tolerance(self) -> float | None:
        return printed_tolerance(self.paper) if self.paper else None


def load_catalogue(path=None) -> list[CatalogueRow]:
    if path is None:
        text = resources.files("apery8").joinpath("data/paper_values.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    out = []
    for r in json.loads(text)["rows"]:
        spec = dict(r["spec"])
        d = len(spec["s"])
        spec.setdefault("kernels", ["2n"] * d)
        spec.setdefault("strict", [])
        out.append(CatalogueRow(r["id"], r["group"], r["anchor"], SeriesSpec.from_dict(spec),
                                r.get("paper"), r.get("closed_form"), r.get("vars", {}), r.get("note")))
    return out
