import json

import pytest

from apery8.catalogue import eval_closed_form, load_catalogue, printed_tolerance
from apery8.cli import SpecError, main, parse_spec, parse_x, scan_specs, verify_paper
from apery8.series_builder import Family, Kernel, RealArg, SeriesSpec


def test_bar_spec():
    sp = parse_spec(["--family", "b", "--s", "1,1", "--bars", "1,1", "--x", "1"])
    assert sp == SeriesSpec(Family.INVERSE_BINOMIAL_B, (1, 1), (-1, -1))
    assert parse_spec(["--s", "1b,1b"]) == sp


def test_eta_and_kernels():
    sp = parse_spec(["--family", "a", "--s", "1,1", "--eta", "-1", "--kernels", "2n-1,2n"])
    assert sp.family is Family.BINOMIAL_A
    assert sp.signs == (-1, 1) and sp.kernels == (Kernel.ODD_MINUS, Kernel.EVEN)
    assert sp.strict == (">", ">")


def test_x_forms():
    assert parse_x("sqrt(j)/2:j=3") == RealArg.parse("sqrt(3)/2")
    assert parse_x("sqrt(j)/2:j=4") == RealArg.parse("1")
    sp = parse_spec(["--s", "2", "--eta", "-1", "--x", "sqrt(2)/2", "--tail", "2", "--strict", ">="])
    assert sp.tail_n == 2 and sp.strict == (">=",)


@pytest.mark.parametrize("argv,where", [
    (["--s", "1,x"], "--s: entry 2"),
    (["--s", "1,,2"], "--s: entry 2"),
    (["--s", "0"], "--s: entry 1"),
    (["--s", "1,1", "--bars", "1,2"], "--bars: entry 2"),
    (["--s", "1,1", "--bars", "1"], "--bars: 1 entries"),
    (["--s", "1,1", "--kernels", "2n,3n"], "--kernels: entry 2"),
    (["--s", "1,1", "--strict", ">,<"], "--strict: entry 2"),
    (["--s", "1", "--eta", "2"], "--eta"),
    (["--s", "1", "--x", "pi"], "--x"),
    (["--s", "1b", "--eta", "-1"], "cannot be combined"),
])
def test_position_labelled_errors(argv, where):
    with pytest.raises(SpecError, match=where.replace("(", r"\(")):
        parse_spec(argv)


def test_usage_errors_exit_2(capsys):
    assert main(["eval", "--s", "1,x"]) == 2
    assert "entry 2" in capsys.readouterr().err
    assert main(["eval", "--s", "1", "--bars", "1", "--eta", "-1"]) == 2
    assert main(["nonsense"]) == 2
    # the non-alternating b series with s_1 = 1 diverges at x = 1
    assert main(["eval", "--s", "1,1"]) == 2


def test_eval_json_round_trip(capsys):
    argv = ["--family", "b", "--s", "2b,1", "--kernels", "2n+1,2n", "--x", "sqrt(2)/2"]
    assert main(["eval", *argv, "--output", "json", "--oracle"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert SeriesSpec.from_dict(out["spec"]) == parse_spec(argv)
    assert out["abs_delta"] < 1e-12


def test_represent(capsys):
    assert main(["represent", "--s", "1b,1b", "--level8", "--check", "--output", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert "w[4] w[1]" in out["omega"]
    assert abs(out["level8_value"] - -0.53464318757261875) < 1e-15
    # w[4] is outside the Cayley table: reported, exit 1
    assert main(["represent", "--s", "1b,1b", "--cayley"]) == 1
    assert "no CAYLEY image" in capsys.readouterr().out
    assert main(["represent", "--s", "2b,1", "--cayley", "--check", "--output", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert abs(out["cayley_value"] - 0.045805888486699) < 5e-15


def test_verify_paper_subset():
    ids = ["Ex4.6", "j=3 (2n)", "Ex5.2"]      # catalogue order
    report = verify_paper(ids=ids[::-1])
    assert [r["id"] for r in report["rows"]] == ids
    assert report["summary"]["total"] == 3 and report["summary"]["passed"] == 3
    for r in report["rows"]:
        assert {"id", "spec", "pipeline", "oracle", "closed_form", "paper", "abs_delta", "pass"} <= set(r)
        assert SeriesSpec.from_dict(r["spec"]) == next(c.spec for c in load_catalogue() if c.id == r["id"])


def test_verify_paper_is_deterministic():
    ids = ["sigma(2b,1;1)", "Ex4.7", "Ex5.5"]
    strip = lambda rep: [{k: v for k, v in r.items() if k != "seconds"} for r in rep["rows"]]
    assert strip(verify_paper(ids=ids)) == strip(verify_paper(ids=ids, jobs=2))


def test_verify_paper_exit_code(capsys):
    assert main(["verify-paper", "--id", "Ex4.6"]) == 0
    assert "1/1 rows pass" in capsys.readouterr().out


def test_leshchiner_command(capsys):
    assert main(["leshchiner", "--k", "1", "--terms", "400", "--output", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["summary"]["passed"] == out["summary"]["total"] == 9


def test_scan_specs_enumerates_valid_specs():
    specs = list(scan_specs(2, 2, ("b",)))
    assert all(sp.weight <= 2 and sp.depth <= 2 for sp in specs)
    assert len(specs) == len(set(specs))
    assert SeriesSpec(Family.INVERSE_BINOMIAL_B, (1, 1), (-1, -1)) in specs


def test_closed_forms():
    assert abs(eval_closed_form("pi^2/6") - 1.6449340668482264) < 1e-15
    assert abs(eval_closed_form("log((4/j)*(sqrt(j+4)-2))", {"j": 3}) - -0.14965874425899814) < 1e-15
    for bad in ("__import__('os')", "pi.real", "open(1)", "foo"):
        with pytest.raises(ValueError):
            eval_closed_form(bad)
    assert printed_tolerance("-0.0777") == pytest.approx(5e-4)
    assert printed_tolerance("0.5346431875726234") == pytest.approx(5e-16)


def test_catalogue_closed_forms_agree():
    from apery8.evaluator import eval_expr
    from apery8.series_builder import build_series_integral
    for row in load_catalogue():
        if row.closed_form and row.id != "Ex5.4":
            value = eval_expr(build_series_integral(row.spec)).value.real
            assert abs(eval_closed_form(row.closed_form, row.variables) - value) < 1e-11, row.id
