"""Command-line front end: evaluate series, show their integral forms, and check the catalogue of printed values."""
from __future__ import annotations

import argparse
import concurrent.futures
import itertools
import json
import re
import sys
import time

import mpmath

from .catalogue import CLOSED_FORM_TOL, CatalogueRow, eval_closed_form, load_catalogue
from .evaluator import EvalConfig, EvaluationError, eval_expr, eval_xlincomb
from .oracle import OracleError, alt_zeta, leshchiner_check, sum_series
from .series_builder import (Family, Kernel, RealArg, SeriesSpec, UnsupportedCombination,
                             build_series_integral)
from .transforms import CAYLEY, LEVEL8, DomainError, image_path, rewrite_lincomb

__all__ = ["main", "parse_spec", "build_parser", "SpecError", "verify_paper"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class SpecError(ValueError):
    """Malformed series flags."""


# ---------------------------------------------------------------------------
# spec flags


def _items(flag: str, text: str) -> list[str]:
    parts = [p.strip() for p in text.split(",")]
    for i, p in enumerate(parts, 1):
        if not p:
            raise SpecError(f"{flag}: entry {i} is empty in {text!r}")
    return parts


def _composition(text: str) -> tuple[list[int], list[int | None]]:
    s, bars = [], []
    for i, p in enumerate(_items("--s", text), 1):
        m = re.fullmatch(r"(\d+)(b?)", p)
        if not m or int(m.group(1)) < 1:
            raise SpecError(f"--s: entry {i} ({p!r}) is not a positive integer, optionally followed by 'b'")
        s.append(int(m.group(1)))
        bars.append(-1 if m.group(2) else None)
    return s, bars


def _bars(text: str, d: int) -> list[int]:
    out = []
    for i, p in enumerate(_items("--bars", text), 1):
        if p not in ("0", "1"):
            raise SpecError(f"--bars: entry {i} ({p!r}) must be 0 or 1")
        out.append(-1 if p == "1" else 1)
    if len(out) != d:
        raise SpecError(f"--bars: {len(out)} entries for a composition of depth {d}")
    return out


def _eta(text: str) -> int:
    if text.strip() not in ("1", "+1", "-1"):
        raise SpecError(f"--eta: {text!r} must be +1 or -1")
    return int(text)


def _kernels(text: str, d: int) -> list[Kernel]:
    out = []
    for i, p in enumerate(_items("--kernels", text), 1):
        try:
            out.append(Kernel(p.replace(" ", "")))
        except ValueError:
            raise SpecError(f"--kernels: entry {i} ({p!r}) must be one of 2n, 2n+1, 2n-1") from None
    if len(out) != d:
        raise SpecError(f"--kernels: {len(out)} entries for a composition of depth {d}")
    return out


def _strict(text: str, d: int) -> list[str]:
    out = []
    for i, p in enumerate(_items("--strict", text), 1):
        if p not in (">", ">="):
            raise SpecError(f"--strict: entry {i} ({p!r}) must be '>' or '>='")
        out.append(p)
    if len(out) != d:
        raise SpecError(f"--strict: {len(out)} entries for a composition of depth {d}")
    return out


def parse_x(text: str) -> RealArg:
    """'1', '1/2', 'sqrt(2)/2', '0.3', or a template such as 'sqrt(j)/2:j=3'."""
    body, _, binding = text.partition(":")
    if binding:
        m = re.fullmatch(r"\s*([a-z])\s*=\s*(\d+(?:/\d+)?)\s*", binding)
        if not m:
            raise SpecError(f"--x: binding {binding!r} must look like 'j=3'")
        body = re.sub(rf"\b{m.group(1)}\b", m.group(2), body)
    try:
        return RealArg.parse(body)
    except ValueError:
        raise SpecError(f"--x: cannot parse {text!r}") from None


def add_spec_arguments(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("series")
    g.add_argument("--family", choices=["a", "b"], default="b",
                   help="b: 4^n x^2n / binom(2n,n); a: binom(2n,n) x^2n / 4^n")
    g.add_argument("--s", required=True, help="composition, e.g. '2,1' or '2b,1b' (b marks a sign (-1)^n)")
    sign = g.add_mutually_exclusive_group()
    sign.add_argument("--bars", help="per-index sign flags, 1 for (-1)^n_j, e.g. '1,0'")
    sign.add_argument("--eta", help="sign on the outer index only: +1 or -1")
    g.add_argument("--kernels", help="per-index denominators, e.g. '2n,2n+1'")
    g.add_argument("--strict", help="per-index relations '>' or '>='")
    g.add_argument("--x", default="1", help="argument: '1', 'sqrt(2)/2', 'sqrt(j)/2:j=3'")
    g.add_argument("--tail", type=int, default=0, help="sum only indices above this n")


def parse_spec(args) -> SeriesSpec:
    """A SeriesSpec from parsed flags or a raw argument list."""
    if isinstance(args, (list, tuple)):
        p = argparse.ArgumentParser(add_help=False, exit_on_error=False)
        add_spec_arguments(p)
        try:
            args, extra = p.parse_known_args(list(args))
        except argparse.ArgumentError as exc:
            raise SpecError(str(exc)) from None
        if extra:
            raise SpecError(f"unrecognised arguments: {' '.join(extra)}")
    s, suffix_bars = _composition(args.s)
    d = len(s)
    if args.bars is not None or args.eta is not None:
        if any(b is not None for b in suffix_bars):
            raise SpecError("--s: 'b' suffixes cannot be combined with --bars or --eta")
    if args.bars is not None:
        signs = _bars(args.bars, d)
    elif args.eta is not None:
        signs = [_eta(args.eta)] + [1] * (d - 1)
    else:
        signs = [b or 1 for b in suffix_bars]
    kernels = _kernels(args.kernels, d) if args.kernels else [Kernel.EVEN] * d
    strict = _strict(args.strict, d) if args.strict else []
    if args.tail < 0:
        raise SpecError("--tail: must be nonnegative")
    try:
        return SeriesSpec(Family(args.family), tuple(s), tuple(signs), tuple(kernels), tuple(strict),
                          parse_x(args.x), args.tail)
    except SpecError:
        raise
    except ValueError as exc:
        raise SpecError(str(exc)) from None


# ---------------------------------------------------------------------------
# evaluation helpers


def _num(v) -> float | None:
    return None if v is None else float(mpmath.re(v))


def _fmt(v, digits: int = 18) -> str:
    return "-" if v is None else mpmath.nstr(mpmath.re(v), digits)


def _pipeline(spec: SeriesSpec, cfg: EvalConfig):
    return eval_expr(build_series_integral(spec), cfg)


def _oracle(spec: SeriesSpec):
    return sum_series(spec)


def _row_report(row: CatalogueRow, cfg: EvalConfig) -> dict:
    out = {"id": row.id, "anchor": row.anchor, "spec": row.spec.to_dict(), "paper": row.paper,
           "pipeline": None, "oracle": None, "closed_form": None, "abs_delta": None, "pass": False,
           "tolerance": row.tolerance, "checks": {}, "note": row.note}
    problems = []
    t0 = time.perf_counter()
    try:
        pipe = _pipeline(row.spec, cfg)
        out["pipeline"], out["pipeline_error"] = _num(pipe.value), pipe.abs_error_estimate
    except (EvaluationError, UnsupportedCombination, ArithmeticError) as exc:
        problems.append(f"pipeline: {exc}")
        pipe = None
    try:
        orc = _oracle(row.spec)
        out["oracle"], out["oracle_error"] = _num(orc.value), orc.abs_error_estimate
    except OracleError as exc:
        problems.append(f"oracle: {exc}")
        orc = None
    if row.closed_form:
        out["closed_form_expr"] = row.closed_form
        out["closed_form"] = _num(eval_closed_form(row.closed_form, row.variables, cfg))
    checks = out["checks"]
    if row.paper is not None:
        paper = mpmath.mpf(row.paper)
        tol = row.tolerance
        if pipe is not None:
            checks["pipeline_vs_paper"] = float(abs(pipe.value.real - paper)) <= tol
            out["abs_delta"] = float(abs(pipe.value.real - paper))
        if orc is not None:
            checks["oracle_vs_paper"] = float(abs(orc.value.real - paper)) <= tol
    if pipe is not None and orc is not None:
        checks["pipeline_vs_oracle"] = float(abs(pipe.value - orc.value)) <= max(
            1e-12, 10 * (pipe.abs_error_estimate + orc.abs_error_estimate))
    if out["closed_form"] is not None and pipe is not None:
        d = abs(out["closed_form"] - float(pipe.value.real))
        checks["closed_form_vs_series"] = d <= CLOSED_FORM_TOL
        if out["abs_delta"] is None:
            out["abs_delta"] = d
    out["pass"] = not problems and bool(checks) and all(checks.values())
    out["problems"] = problems
    out["seconds"] = round(time.perf_counter() - t0, 3)
    return out


def _run_row(payload):
    row, cfg = payload
    with mpmath.workprec(max(mpmath.mp.prec, cfg.precision + 30)):
        return _row_report(row, cfg)


def verify_paper(cfg: EvalConfig | None = None, *, groups=None, ids=None, jobs: int = 1) -> dict:
    """Every catalogue row: pipeline, oracle and closed form against the printed value."""
    cfg = cfg or EvalConfig()
    rows = [r for r in load_catalogue() if (not groups or r.group in groups) and (not ids or r.id in ids)]
    payload = [(r, cfg) for r in rows]
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(jobs) as ex:
            reports = list(ex.map(_run_row, payload))
    else:
        reports = [_run_row(p) for p in payload]
    passed = sum(r["pass"] for r in reports)
    return {"rows": reports,
            "summary": {"total": len(reports), "passed": passed, "failed": len(reports) - passed,
                        "precision_bits": cfg.precision}}


# ---------------------------------------------------------------------------
# commands


def _cfg(args) -> EvalConfig:
    kw = {}
    if getattr(args, "target", None):
        kw["target_abs_error"] = args.target
    if getattr(args, "precision", None):
        kw["working_precision"] = args.precision
    return EvalConfig(**kw)


def _emit(args, payload: dict, text: str) -> None:
    if args.output == "json":
        json.dump(payload, sys.stdout, indent=1)
        sys.stdout.write("\n")
    else:
        print(text)


def cmd_eval(args) -> int:
    spec = parse_spec(args)
    cfg = _cfg(args)
    res = _pipeline(spec, cfg)
    payload = {"spec": spec.to_dict(), "label": spec.label(), "pipeline": _num(res.value),
               "pipeline_digits": _fmt(res.value, 25), "error": res.abs_error_estimate,
               "engine": res.engine.value}
    lines = [f"{spec.label()} = {res}"]
    if args.oracle:
        orc = _oracle(spec)
        payload.update(oracle=_num(orc.value), oracle_error=orc.abs_error_estimate,
                       abs_delta=float(abs(orc.value - res.value)))
        lines.append(f"direct sum: {orc}")
        lines.append(f"|difference| = {payload['abs_delta']:.2e}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_represent(args) -> int:
    spec = parse_spec(args)
    expr = build_series_integral(spec)
    payload = {"spec": spec.to_dict(), "omega": str(expr)}
    text = [f"{spec.label()} as Omega words:", str(expr)]
    tables = [t for flag, t in ((args.level8, LEVEL8), (args.cayley, CAYLEY)) if flag]
    cfg = _cfg(args)
    for table in tables:
        key = table.name.lower()
        try:
            pieces = []
            total = mpmath.mpc(0)
            for pref, lc in expr.parts.items():
                img, end = rewrite_lincomb(table, lc, spec.x)
                pieces.append({"prefactor": str(pref), "x_words": str(img), "endpoint": mpmath.nstr(end, 20)})
                if args.check:
                    v = eval_xlincomb(img, image_path(table, spec.x), cfg).value
                    total += v * expr.prefactor_value(pref, cfg.precision + 20)
            payload[key] = pieces
            text.append(f"\n{table.name} rewrite (path from {table.start}):")
            for p in pieces:
                text.append(f"prefactor {p['prefactor']}, endpoint {p['endpoint']}:")
                text.extend("    " + ln for ln in p["x_words"].splitlines())
            if args.check:
                total *= expr.overall_scalar.embed(cfg.precision + 20)
                payload[key + "_value"] = _num(total)
                text.append(f"value of the rewritten words: {_fmt(total)}")
        except DomainError as exc:
            payload[key] = {"error": str(exc)}
            text.append(f"\n{table.name}: {exc}")
    _emit(args, payload, "\n".join(text))
    return EXIT_OK if all(not isinstance(payload[t.name.lower()], dict) for t in tables) else EXIT_FAIL


def cmd_verify(args) -> int:
    report = verify_paper(_cfg(args), groups=args.group, ids=args.id, jobs=args.jobs)
    lines = []
    for r in report["rows"]:
        mark = "PASS" if r["pass"] else "FAIL"
        delta = "-" if r["abs_delta"] is None else f"{r['abs_delta']:.1e}"
        lines.append(f"{mark} {r['id']:<26} pipeline {_fmt(r['pipeline'], 17):>23} "
                     f"oracle {_fmt(r['oracle'], 17):>23} paper {r['paper'] or '-':>22} "
                     f"closed {_fmt(r['closed_form'], 15):>20} delta {delta}")
        failed = [k for k, ok in r["checks"].items() if not ok] + r["problems"]
        if failed:
            lines.append(f"     failed: {', '.join(failed)}")
    s = report["summary"]
    lines.append(f"{s['passed']}/{s['total']} rows pass")
    _emit(args, report, "\n".join(lines))
    return EXIT_OK if s["failed"] == 0 else EXIT_FAIL


def cmd_leshchiner(args) -> int:
    rows = []
    for k in args.k:
        for variant in (1, 2, 3, 4):
            r = leshchiner_check(k, variant, args.terms, reading=args.reading)
            ok = float(r.diff) <= args.tol + r.tail
            rows.append({"id": f"k={k} variant {variant}", "lhs": _num(r.lhs), "rhs": _num(r.rhs),
                         "abs_delta": float(r.diff), "tail": r.tail, "pass": ok})
    for n in range(2, 7):
        with mpmath.workprec(120):
            v = alt_zeta(n).value.real
            ref = (mpmath.mpf(2) ** (1 - n) - 1) * mpmath.zeta(n)
            d = float(abs(v - ref))
        rows.append({"id": f"zeta({n} bar)", "lhs": _num(v), "rhs": _num(ref), "abs_delta": d,
                     "pass": d <= 1e-12})
    passed = sum(r["pass"] for r in rows)
    text = [f"{'PASS' if r['pass'] else 'FAIL'} {r['id']:<16} {_fmt(r['lhs'], 20):>24} "
            f"{_fmt(r['rhs'], 20):>24} {r['abs_delta']:.1e}" for r in rows]
    text.append(f"{passed}/{len(rows)} identities hold")
    _emit(args, {"rows": rows, "summary": {"total": len(rows), "passed": passed}}, "\n".join(text))
    return EXIT_OK if passed == len(rows) else EXIT_FAIL


def scan_specs(max_weight: int, max_depth: int, families=("a", "b"), xs=("1",)):
    """Every spec up to the given weight and depth, over signs, kernels and arguments."""
    for fam, d in itertools.product(families, range(1, max_depth + 1)):
        for s in itertools.product(range(1, max_weight + 1), repeat=d):
            if sum(s) > max_weight:
                continue
            for signs, kernels, x in itertools.product(itertools.product((1, -1), repeat=d),
                                                       itertools.product(list(Kernel), repeat=d), xs):
                try:
                    yield SeriesSpec(Family(fam), s, signs, kernels, (), RealArg.parse(x))
                except ValueError:
                    continue


def cmd_scan(args) -> int:
    """For each spec: does the builder produce a finite value that the direct sum confirms?"""
    cfg = _cfg(args)
    rows = []
    for spec in scan_specs(args.max_weight, args.max_depth, tuple(args.family), tuple(args.x)):
        row = {"id": spec.label(), "spec": spec.to_dict()}
        try:
            expr = build_series_integral(spec)
        except UnsupportedCombination as exc:
            row.update(status="unsupported", detail=str(exc), **{"pass": True})
            rows.append(row)
            continue
        row["level8_letters"] = all(l in LEVEL8.domain for l in _omegas(expr))
        try:
            pipe = eval_expr(expr, cfg)
            orc = sum_series(spec)
        except (EvaluationError, OracleError, ArithmeticError) as exc:
            row.update(status="error", detail=str(exc), **{"pass": False})
            rows.append(row)
            continue
        d = float(abs(pipe.value - orc.value))
        row.update(status="ok", pipeline=_num(pipe.value), oracle=_num(orc.value), abs_delta=d,
                   **{"pass": d <= args.tol})
        rows.append(row)
    failed = [r for r in rows if not r["pass"]]
    summary = {"total": len(rows), "evaluated": sum(r["status"] == "ok" for r in rows),
               "unsupported": sum(r["status"] == "unsupported" for r in rows), "failed": len(failed)}
    text = [f"{'ok  ' if r['pass'] else 'FAIL'} {r['id']:<40} {r['status']:<12} "
            f"{_fmt(r.get('pipeline'), 15):>20} {r.get('abs_delta', 0):.1e}" for r in rows]
    text.append(f"{summary['evaluated']} evaluated, {summary['unsupported']} unsupported, "
                f"{summary['failed']} failed")
    _emit(args, {"rows": rows, "summary": summary}, "\n".join(text))
    return EXIT_OK if not failed else EXIT_FAIL


def _omegas(expr):
    from .forms import AlgForm
    return {l.omega if isinstance(l, AlgForm) else l for l in expr.letters()}


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="apery8", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=["text", "json"], default="text")
    common.add_argument("--precision", type=int, help="working precision in bits (53..212)")
    common.add_argument("--target", type=float, help="target absolute error")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate one series")
    add_spec_arguments(e)
    e.add_argument("--oracle", action="store_true", help="also sum the series directly")
    e.set_defaults(func=cmd_eval)

    r = sub.add_parser("represent", parents=[common], help="print the iterated-integral form")
    add_spec_arguments(r)
    r.add_argument("--level8", action="store_true", help="rewrite with t = sqrt2 u / sqrt(1 + u^4)")
    r.add_argument("--cayley", action="store_true", help="rewrite with t = i(1 - u^2)/(1 + u^2)")
    r.add_argument("--check", action="store_true", help="evaluate the rewritten words")
    r.set_defaults(func=cmd_represent)

    v = sub.add_parser("verify-paper", parents=[common], help="check the catalogue of printed values")
    v.add_argument("--group", action="append", help="restrict to a catalogue group (repeatable)")
    v.add_argument("--id", action="append", help="restrict to a row id (repeatable)")
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    le = sub.add_parser("leshchiner", parents=[common], help="check the Leshchiner-type identities")
    le.add_argument("--k", type=int, action="append", help="k values (default 1 and 2)")
    le.add_argument("--terms", type=int, default=2000)
    le.add_argument("--tol", type=float, default=1e-6)
    le.add_argument("--reading", choices=["displayed", "bernoulli"], default="displayed")
    le.set_defaults(func=cmd_leshchiner)

    c = sub.add_parser("conjecture-scan", parents=[common],
                       help="evaluate every small spec by both routes and compare")
    c.add_argument("--max-weight", type=int, default=3)
    c.add_argument("--max-depth", type=int, default=2)
    c.add_argument("--family", action="append", choices=["a", "b"])
    c.add_argument("--x", action="append", help="arguments to scan (default 1)")
    c.add_argument("--tol", type=float, default=1e-8)
    c.set_defaults(func=cmd_scan)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "leshchiner" and not args.k:
        args.k = [1, 2]
    if args.command == "conjecture-scan":
        args.family = args.family or ["a", "b"]
        args.x = args.x or ["1"]
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"apery8: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnsupportedCombination, DomainError) as exc:
        print(f"apery8: unsupported: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EvaluationError, OracleError) as exc:
        print(f"apery8: evaluation failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
