from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from hecke4.cli import SCHEMA, UsageError, main, parse_expr, parse_rational, run
from hecke4.gaps import M0
from hecke4.qfield import SQRT2, AlgSum, from_json, sign, sqrt


def _main(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_markoff_sqrt10(capsys):
    code, out, _ = _main(["markoff", "--word", "(32)"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["schema"] == SCHEMA
    assert from_json(rep["results"]["value"]["exact"]) == sqrt(10)
    assert rep["results"]["value"]["decimal"].startswith("3.16227766")
    assert rep["results"]["minimal_polynomial"] == [1, 0, -10]


def test_markoff_spliced():
    rep = run(["markoff", "--word", "(21312313)23232(31321312)"])
    assert from_json(rep["results"]["value"]["exact"]) == M0


def test_discrete_spectrum_table(capsys):
    code, out, _ = _main(["discrete-spectrum", "--bound", "60", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert [r["value_exact"] for r in rows[:3]] == ["2", "√6", "(2/3)√17"]
    assert rows[0]["source"] == "y" and rows[1]["source"] == "x"


def test_eval_word():
    rep = run(["eval", "--word", "3(2)"])
    assert from_json(rep["results"]["value"]["exact"]) == SQRT2 + 1


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--word", "(3)"],
        ["expand", "--value", "sqrt(3)", "--digits", "8"],
        ["markoff", "--word", "(2)"],
        ["lagrange", "--word", "12(31)"],
        ["section", "--section", "(13)2|(31)"],
        ["triples", "--bound", "60"],
        ["discrete-spectrum", "--bound", "30"],
        ["gap-check", "--lo", "sqrt(238)/5", "--hi", "sqrt(10)", "--max-len", "6"],
        ["hall", "--alpha", "6", "--eps", "1/10**6"],
        ["hall", "--alpha", "7", "--lagrange", "--depth", "2"],
        ["hall-lagrange", "--alpha", "10", "--depth", "2"],
        ["dim-bound", "--eps", "1/2", "--tol", "1e-6"],
        ["circle-orbit", "--triple", "20,21,29"],
        ["pythagoras-tree", "--cmax", "50"],
        ["lagrange-est", "--value", "1+sqrt2", "--qmax", "1000", "--hmax", "1000000"],
        ["verify-paper", "--criteria", "2,7"],
    ],
    ids=lambda a: a[0],
)
def test_reports_round_trip(argv):
    rep = run(argv)
    assert rep["verdict"]["ok"]
    assert json.loads(json.dumps(rep)) == rep
    for fmt in ("json", "csv"):
        assert run(argv + ["--format", fmt])["results"].keys() == rep["results"].keys()


def _exact_fields(obj):
    if isinstance(obj, dict):
        if "exact" in obj:
            yield obj["exact"], obj.get("decimal", obj.get("value_decimal"))
        for v in obj.values():
            yield from _exact_fields(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from _exact_fields(v)


def test_exact_fields_decode_to_their_decimals():
    rep = run(["discrete-spectrum", "--bound", "60", "--precision", "12"])
    n = 0
    for exact, dec in _exact_fields(rep["results"]):
        v = from_json(exact)
        assert abs(float(v) - float(dec)) < 1e-11
        n += 1
    assert n > 5


def test_gap_violation_exit_status(capsys):
    code, out, _ = _main(["gap-check", "--lo", "282/100", "--hi", "284/100", "--max-len", "6"], capsys)
    rep = json.loads(out)
    assert code == 1
    assert not rep["verdict"]["ok"] and rep["results"]["violations"]


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2
    assert _main(["expand", "--value", "1.5"], capsys)[0] == 2
    assert _main(["expand", "--value", "sqrt(2"], capsys)[0] == 2
    assert _main(["markoff", "--word", "32"], capsys)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["triples", "--bound", "0"])
    assert exc.value.code == 2
    code, _, err = _main(["hall", "--alpha", "5"], capsys)
    assert code == 1 and "threshold" in err


def test_precision_env(monkeypatch):
    monkeypatch.setenv("HECKE4_PRECISION", "5")
    rep = run(["eval", "--word", "3(2)"])
    assert rep["results"]["value"]["decimal"] == "2.41421"
    assert run(["eval", "--word", "3(2)", "--precision", "3"])["results"]["value"]["decimal"] == "2.414"


def test_expr_parser():
    assert parse_expr("sqrt2") == SQRT2
    assert parse_expr("2*sqrt(17)/3") == 2 * sqrt(17) / 3
    assert parse_expr("4*sqrt2 + 1/10**3") == 4 * SQRT2 + QSqrt2_frac(1, 1000)
    assert parse_expr("m0") == M0
    assert parse_expr("-(1+sqrt(3))**2") == -(4 + 2 * sqrt(3))
    s = parse_expr("sqrt(3) + sqrt(5)")
    assert isinstance(s, AlgSum) and sign(s - 3) > 0
    for bad in ("1.5", "x", "sqrt(1, 2)", "2**sqrt2", "1/0", "__import__('os')", "[1]"):
        with pytest.raises(UsageError):
            parse_expr(bad)
    assert parse_rational("1e-9") == QSqrt2_frac(1, 10**9).a
    with pytest.raises(UsageError):
        parse_rational("sqrt2")


def QSqrt2_frac(p, q):
    from fractions import Fraction

    from hecke4.qfield import QSqrt2

    return QSqrt2(Fraction(p, q))


def test_console_script():
    out = subprocess.run(
        [sys.executable, "-m", "hecke4.cli", "markoff", "--word", "(31)", "--format", "csv"],
        capture_output=True,
        text=True,
        check=True,
    ).stdout
    assert out.splitlines()[0] == "word,value_exact,value_decimal"
    assert "2.449489742" in out
