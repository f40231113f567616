import json
import math
import subprocess
import sys

import numpy as np
import pytest

from cuspdet import bessel, cli
from cuspdet.operator import BoundaryCondition, OperatorSpec, Potential

MODEL = {"a": 1.0, "mu": 1.0, "bc": {"kind": "dirichlet"}, "potential": {"form": "zero"}, "nu": 1.0}


def write_spec(tmp_path, d, name="spec.json"):
    p = tmp_path / name
    p.write_text(json.dumps(d))
    return str(p)


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bessel_command(capsys):
    code, out, _ = run(["bessel", "--order", "0.5", "--x", "1.0"], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["K"] == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1), rel=1e-14)
    assert {"I", "K", "I_prime", "K_prime", "regime", "est_rel_err"} <= set(d)


def test_bessel_kind_and_overflow(capsys):
    code, out, _ = run(["bessel", "--order", "2", "--x", "800", "--kind", "i"], capsys)
    d = json.loads(out)
    assert code == 0 and set(d["I"]) == {"mantissa", "exponent"}
    code, out, _ = run(["bessel", "--order", "3", "--x", "2", "--kind", "product"], capsys)
    assert json.loads(out)["IK"] == pytest.approx(bessel.bessel_i(3, 2.0) * bessel.bessel_k(3, 2.0), rel=1e-13)


def test_fit_command(tmp_path, capsys):
    x = np.geomspace(2, 200, 40)
    p = tmp_path / "s.csv"
    np.savetxt(p, np.c_[x, np.log(x) + 2 + 3 / x], delimiter=",")
    code, out, _ = run(["fit", "--data", str(p), "--basis", "0:1,0:0,-1:0"], capsys)
    d = json.loads(out)
    assert code == 0
    assert np.allclose(d["coefficients"], [1, 2, 3], atol=1e-10)
    assert d["lim"] == pytest.approx(2, abs=1e-10)


def test_fit_bad_basis(tmp_path, capsys):
    p = tmp_path / "s.csv"
    p.write_text("1,2\n3,4\n")
    assert run(["fit", "--data", str(p), "--basis", "zero"], capsys)[0] == 1


def test_trace_command_csv(tmp_path, capsys):
    spec = write_spec(tmp_path, MODEL)
    code, out, _ = run(["trace", "--spec", spec, "--z-grid", "1:10:4"], capsys)
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "z,trace" and len(lines) == 5
    assert float(lines[1].split(",")[1]) > float(lines[-1].split(",")[1]) > 0


def test_trace_command_fit(tmp_path, capsys):
    spec = write_spec(tmp_path, MODEL)
    code, out, _ = run(["trace", "--spec", spec, "--fit"], capsys)
    d = json.loads(out)
    assert code == 0
    assert d["fit"]["b0"] == pytest.approx(0.5, abs=1e-5)


def test_detz_both_agree(tmp_path, capsys):
    spec = write_spec(tmp_path, MODEL)
    code, out, _ = run(["detz", "--spec", spec, "--method", "both"], capsys)
    d = json.loads(out)
    assert code == 0
    assert d["diagnostics"]["agree"]
    assert d["value"] == pytest.approx(math.sqrt(2 / math.pi) * bessel.bessel_k(1, 1.0), rel=1e-9)
    assert abs(d["trace"]["log_value"] - d["wronskian"]["log_value"]) < 1e-3


def test_detz_nu_override(tmp_path, capsys):
    spec = write_spec(tmp_path, MODEL)
    _, out, _ = run(["detz", "--spec", spec, "--nu", "2"], capsys)
    assert json.loads(out)["value"] == pytest.approx(
        math.sqrt(2 / math.pi) * bessel.bessel_k(2, 1.0), rel=1e-9)


@pytest.mark.parametrize("bad,word", [({"a": 0.0}, "a"), ({"a": -1.0}, "a"), ({"mu": 0.0}, "mu")])
def test_invalid_spec_exit_2(tmp_path, capsys, bad, word):
    spec = write_spec(tmp_path, {**MODEL, **bad})
    code, _, err = run(["detz", "--spec", spec], capsys)
    assert code == 2
    assert f"{word} must be > 0" in err


def test_malformed_and_missing_spec(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(["detz", "--spec", str(p)], capsys)[0] == 2
    assert run(["detz", "--spec", str(tmp_path / "none.json")], capsys)[0] == 2
    spec = write_spec(tmp_path, {**MODEL, "colour": "red"})
    assert run(["detz", "--spec", spec], capsys)[0] == 2


def test_usage_errors(capsys):
    assert run(["frobnicate"], capsys)[0] == 1
    assert run([], capsys)[0] == 1
    assert run(["bessel", "--order", "1"], capsys)[0] == 1
    assert run(["--log-level", "chatty", "bessel", "--order", "1", "--x", "1"], capsys)[0] == 1


def test_unknown_tolerance_rejected(tmp_path, capsys):
    spec = write_spec(tmp_path, MODEL)
    code, _, err = run(["--tol", "fudge=1", "detz", "--spec", spec], capsys)
    assert code == 1 and "fudge" in err
    assert run(["--tol", "compare_tol", "detz", "--spec", spec], capsys)[0] == 1


def test_eigs_guard_exit_3(tmp_path, capsys):
    spec = write_spec(tmp_path, MODEL)
    code, _, err = run(["eigs", "--spec", spec, "--count", "20", "--R", "40"], capsys)
    assert code == 3 and "R >=" in err


def test_eigs_command(tmp_path, capsys):
    spec = write_spec(tmp_path, MODEL)
    code, out, _ = run(["eigs", "--spec", spec, "--count", "5"], capsys)
    rows = out.strip().splitlines()
    assert code == 0 and rows[0] == "index,lambda,tolerance" and len(rows) == 6
    lams = [float(r.split(",")[1]) for r in rows[1:]]
    assert lams == sorted(lams) and lams[0] > 0


def test_weyl_command(tmp_path, capsys):
    spec = write_spec(tmp_path, MODEL)
    code, out, _ = run(["weyl", "--spec", spec, "--lambda-max", "500", "--n", "2000"], capsys)
    rows = out.strip().splitlines()
    assert code == 0 and rows[0] == "lambda,N,weyl_leading,weyl_refined"
    counts = [int(r.split(",")[1]) for r in rows[1:]]
    assert counts == sorted(counts)


def test_show_defaults(capsys):
    code, out, _ = run(["--show-defaults"], capsys)
    d = json.loads(out)
    assert code == 0
    assert d["version"] and "tolerances" in d and "spectral" in d
    assert d["spectral"]["n"] == 8000


def test_out_file(tmp_path, capsys):
    target = tmp_path / "o.json"
    code, out, _ = run(["--out", str(target), "bessel", "--order", "1", "--x", "2"], capsys)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["order"] == 1.0


def test_deterministic_output(tmp_path, capsys):
    spec = write_spec(tmp_path, {**MODEL, "bc": {"kind": "neumann", "alpha": 1.0},
                                 "potential": {"form": "analytic", "preset": "power_exp",
                                               "params": {"c": 0.3, "p": 0.5, "beta": 1.0}}})
    argv = ["--seed", "3", "detz", "--spec", spec, "--method", "both"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second


def test_spec_round_trip(tmp_path):
    spec = OperatorSpec(0.5, 2.0, BoundaryCondition.neumann(1.0), Potential.power_exp(0.3, 0.5, 1.0), 2.0)
    p = write_spec(tmp_path, json.loads(spec.to_json()))
    again = cli.load_spec(p)
    assert again == spec and again.to_json() == spec.to_json()


def test_tabulated_csv_relative_path(tmp_path, capsys):
    g = np.linspace(1, 5, 41)
    np.savetxt(tmp_path / "v.csv", np.c_[g, 0.1 * np.exp(-g)], delimiter=",")
    spec = write_spec(tmp_path, {**MODEL, "potential": {"form": "tabulated", "csv": "v.csv"}})
    code, out, _ = run(["detz", "--spec", spec], capsys)
    assert code == 0 and json.loads(out)["value"] > 0


def test_compare_quick(capsys):
    code, out, _ = run(["compare", "--quick"], capsys)
    rows = out.strip().splitlines()
    assert code == 0
    assert len(rows) == 1 + 12
    assert all(r.endswith("True") for r in rows[1:])


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "cuspdet.cli", "bessel", "--order", "0", "--x", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["order"] == 0.0
