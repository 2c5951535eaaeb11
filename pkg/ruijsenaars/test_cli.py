import json

import numpy as np
import pytest

from ruijsenaars.cli import UsageError, format_literal, main, parse_axis, parse_literal
from ruijsenaars.functions.gammalib import Periods, cgamma, hyp_gamma


def _json_lines(out):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


def test_parse_literal():
    assert parse_literal("3") == 3 and isinstance(parse_literal("3"), int)
    assert parse_literal("-0.25") == -0.25
    assert parse_literal("1e-3") == 1e-3
    assert parse_literal("0.5i") == 0.5j
    assert parse_literal("-1i") == -1j
    assert parse_literal("i") == 1j
    assert parse_literal("0.4+0.1i") == 0.4 + 0.1j
    assert parse_literal("-2-3.5i") == -2 - 3.5j
    assert parse_literal("1e-2+1e-3i") == 0.01 + 0.001j
    for bad in ("", "abc", "1+i2", "0.4+0.1j", "1..2", "--1"):
        with pytest.raises(UsageError):
            parse_literal(bad)


def test_format_literal():
    for z in (0.4 + 0.1j, -1j, 2.0, 1e-20 - 3j, -0.1 + 1 / 3j):
        assert parse_literal(format_literal(z)) == z


def test_parse_axis():
    values = parse_axis("delta", "0.05:0.005:8")
    assert len(values) == 8
    assert not np.iscomplexobj(values)
    assert np.isclose(values[-1], 0.005)
    values = parse_axis("x", "0.0:0.5i:11")
    assert np.iscomplexobj(values)
    assert np.isclose(values[5], 0.25j)
    for bad in ("0:1:0", "0:1", "0:1:2.5"):
        with pytest.raises(UsageError):
            parse_axis("x", bad)


def test_eval_json(capsys):
    code = main(["eval", "hyp-gamma", "u=0.4+0.1i", "w1=1", "w2=1.41421356", "--json"])
    assert code == 0
    rows = _json_lines(capsys.readouterr().out)
    assert len(rows) == 1
    assert set(rows[0]) == {"value_re", "value_im", "abs_err", "ms"}
    expected = hyp_gamma(0.4 + 0.1j, Periods(1.0, 1.41421356))
    assert rows[0]["value_re"] == expected.real
    assert rows[0]["value_im"] == expected.imag


def test_eval_cgamma(capsys):
    assert main(["eval", "cgamma", "u=-1i", "n=1", "--format", "json"]) == 0
    row = _json_lines(capsys.readouterr().out)[0]
    assert np.isclose(row["value_re"], 1.0)
    assert abs(row["value_im"]) < 1e-14
    assert row["value_re"] == complex(cgamma(-1j, 1)).real


def test_eval_table_and_csv(capsys):
    assert main(["eval", "cgamma", "u=0.3", "n=2", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "value_re,value_im,abs_err,ms"
    assert len(lines) == 2
    assert main(["eval", "cgamma", "u=0.3", "n=2"]) == 0
    assert capsys.readouterr().out.split()[:4] == ["value_re", "value_im", "abs_err", "ms"]


def test_eval_exit_codes(capsys):
    # pole of the numerator at u = i, n = 1
    assert main(["eval", "cgamma", "u=1i", "n=1"]) == 2
    assert main(["eval", "cgamma", "u=0.4+", "n=1"]) == 64
    assert main(["eval", "cgamma", "u=0.4", "m=1"]) == 64
    assert main(["eval", "cgamma", "u0.4"]) == 64
    assert main(["eval", "no-such-function", "u=1"]) == 64
    assert main(["eval", "cgamma", "u=0.4"]) == 2
    assert main(["frobnicate"]) == 64
    assert main(["eval", "cgamma", "u=0.4", "n=1", "--format", "xml"]) == 64
    captured = capsys.readouterr()
    assert "unknown parameter 'm'" in captured.err
    assert captured.out == ""


def test_verify_selection(capsys):
    assert main(["verify", "g-refl", "cgamma-refl", "--tol", "1e-8", "--json", "--no-progress"]) == 0
    captured = capsys.readouterr()
    reports = _json_lines(captured.out)
    assert [r["id"] for r in reports] == ["g-refl", "cgamma-refl"]
    for r in reports:
        assert set(r) == {"id", "params", "lhs", "rhs", "abs_residual", "rel_residual", "tolerance", "pass",
                          "ms", "warnings"}
        assert r["tolerance"] == 1e-8
        assert r["pass"] is True
    assert "2 passed, 0 failed" in captured.err


def test_verify_list(capsys):
    assert main(["verify", "--list", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "id,kind,family,anchor,flags"
    ids = [line.split(",")[0] for line in lines[1:]]
    assert "pentagon" in ids and "gamma-lim1" in ids
    assert "q-commutativity" in ids


def test_verify_usage(capsys):
    assert main(["verify", "no-such-identity"]) == 64
    assert main(["verify", "--all", "--exclude", "no-such-identity"]) == 64
    assert main(["verify"]) == 64
    assert "known ids" in capsys.readouterr().err


def test_verify_failure_exit(capsys):
    assert main(["verify", "g-refl", "--tol", "0", "--json", "--no-progress"]) in (0, 3)
    report = _json_lines(capsys.readouterr().out)[0]
    assert report["pass"] is (report["rel_residual"] == 0)


def test_limits(capsys):
    code = main(["limits", "gamma-lim1", "--deltas", "0.04,0.02,0.01,0.005,0.0025", "--json", "--no-progress"])
    assert code == 0
    report = _json_lines(capsys.readouterr().out)[0]
    assert report["id"] == "gamma-lim1"
    assert report["params"]["deltas"] == [0.04, 0.02, 0.01, 0.005, 0.0025]
    assert report["pass"] is True
    assert main(["limits", "no-such-limit"]) == 64
    assert main(["limits", "gamma-lim1", "--deltas", "a,b"]) == 64
    assert main(["limits", "gamma-lim1", "--deltas", "0.04,0.02", "--no-progress"]) != 0


def test_sweep_limit(capsys):
    assert main(["sweep", "gamma-lim1", "delta=0.05:0.005:8", "--format", "csv", "--no-progress"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "delta,value_re,value_im,abs_err,ms,message"
    assert len(lines) == 9
    ratios = [float(line.split(",")[1]) for line in lines[1:]]
    assert abs(ratios[-1] - 1) < abs(ratios[0] - 1)


def test_sweep_weight(capsys):
    args = ["sweep", "weight.SP_cr", "u=-2:2:41", "k=0", "l=0", "h=-1.2i", "--json", "--no-progress"]
    assert main(args) == 0
    rows = _json_lines(capsys.readouterr().out)
    assert len(rows) == 41
    assert np.isclose(rows[0]["u"], -2.0) and np.isclose(rows[-1]["u"], 2.0)
    scale = max(abs(r["value_re"]) for r in rows)
    for r in rows:
        assert r["value_re"] >= -1e-12 * scale
        assert abs(r["value_im"]) <= 1e-10 * scale
    # even in u
    assert np.isclose(rows[10]["value_re"], rows[30]["value_re"])


def test_sweep_usage(capsys):
    assert main(["sweep", "gamma-lim1", "delta=0.05:0.005:0"]) == 64
    assert main(["sweep", "gamma-lim1", "m=1"]) == 64
    assert main(["sweep", "gamma-lim1", "u=0:1:3"]) == 64
    assert main(["sweep", "cgamma", "u=0:1:3", "n=0:2:3"]) == 64
    assert main(["sweep", "cgamma.x", "u=0:1:3"]) == 64
    assert main(["sweep", "no-such-target", "u=0:1:3"]) == 64


def test_sweep_records_failures(capsys):
    # the n = 1 numerator has a pole at u = i
    assert main(["sweep", "cgamma", "u=0:2i:3", "n=1", "--json", "--no-progress"]) == 2
    rows = _json_lines(capsys.readouterr().out)
    assert len(rows) == 3
    assert rows[0]["message"] == ""
    assert rows[1]["message"].startswith("PoleError")
    assert rows[1]["value_re"] is None


def test_list(capsys):
    assert main(["list", "functions", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 10
    assert lines[1].startswith("function,hyp-gamma,")
    assert main(["list", "limits", "--json"]) == 0
    names = [r["name"] for r in _json_lines(capsys.readouterr().out)]
    assert "weight-SPh2-variants" in names
