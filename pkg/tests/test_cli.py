"""Command line interface: subcommands, report schema, exit codes."""

import json
import re
import subprocess
import sys

import pytest

from wmfock import cli
from wmfock.errors import InternalConsistencyError

RUNTIME = re.compile(rb'"runtimeMillis": \d+')


def run_cli(*args):
    proc = subprocess.run([sys.executable, "-m", "wmfock.cli", *args],
                          capture_output=True)
    return proc.returncode, proc.stdout, proc.stderr


def run_json(*args):
    code, out, err = run_cli(*args)
    assert code == 0, err.decode()
    return json.loads(out)


def test_rewrite_report():
    rep = run_json("rewrite", "--case", "z", "--expr", "c(1) a(1)")
    assert rep["case"] == "Z"
    assert rep["normalForm"] == "-a(0)c(0) + a(1)c(1)"
    assert rep["unit"] == 0
    assert rep["lambdaTerms"] == {}
    assert rep["pairTerms"] == {"0": -1, "1": 1}
    assert "runtimeMillis" in rep


def test_rewrite_show_steps():
    rep = run_json("rewrite", "--case", "n", "--expr", "c(2) a(1) c(1)",
                   "--show-steps")
    assert rep["normalForm"] == "c(2)c(0)a(0) + c(2)c(1)a(1)"
    assert rep["steps"][0]["rule"] == "N5"


def test_moments_json():
    rep = run_json("moments", "--expr", "x(1)", "--max-order", "10")
    assert rep["suite"] == "moments"
    assert rep["moments"] == [1, 0, 1, 0, 2, 0, 5, 0, 14, 0, 42]


def test_moments_csv():
    code, out, _ = run_cli("moments", "--expr", "x(1)", "--max-order", "6",
                           "--csv")
    assert code == 0
    lines = out.decode().strip().splitlines()
    assert lines[0] == "order,moment"
    assert lines[1:] == ["0,1", "1,0", "2,1", "3,0", "4,2", "5,0", "6,5"]


def test_verify_exel_laca_schema():
    rep = run_json("verify", "--suite", "exel-laca", "--window", "-4..4",
                   "--particles", "3", "--max-size", "1")
    assert set(rep) == {"suite", "config", "instances", "summary",
                        "runtimeMillis"}
    assert rep["suite"] == "exel-laca"
    assert rep["summary"]["failed"] == 0
    assert rep["summary"]["total"] == len(rep["instances"])
    for inst in rep["instances"]:
        assert set(inst) >= {"id", "pass"}
        assert inst["pass"] is True


def test_verify_negative_window_token():
    # "-6..6" after a space must not be read as an option flag
    code, out, _ = run_cli("verify", "--suite", "relations-z", "--window",
                           "-3..3", "--particles", "3")
    assert code == 0
    rep = json.loads(out)
    assert rep["config"]["window"] == [-3, 3]


def test_verify_anti_suite():
    rep = run_json("verify", "--suite", "anti", "--window", "1..4",
                   "--particles", "3")
    kinds = {i["id"].split("[")[0] for i in rep["instances"]}
    assert "annihilate-create" in kinds
    assert rep["summary"]["failed"] == 0


def test_verify_rep_n_suite():
    rep = run_json("verify", "--suite", "rep-n", "--window", "1..4",
                   "--particles", "3", "--max-index", "2")
    assert rep["summary"]["failed"] == 0
    kinds = {i["id"].split("[")[0].split(":")[1] for i in rep["instances"]}
    assert "vacuum-projection" in kinds and "gauge-degree" in kinds


def test_cesaro_bound():
    rep = run_json("cesaro", "--word", "c(0)", "--n", "4")
    inst = rep["instances"][0]
    assert inst["id"] == "bound[n=4]"
    assert inst["pass"] is True
    assert inst["discrepancy"] <= inst["details"]["bound"]


def test_limit_vacuum():
    rep = run_json("limit", "--N", "12", "--vector", "")
    inst = rep["instances"][0]
    assert inst["id"] == "residual[N=12]"
    assert inst["details"]["residual"] == pytest.approx(0.2, abs=1e-12)
    assert inst["details"]["closedForm"] == pytest.approx(0.2, abs=1e-12)


def test_limit_multiple_sizes():
    rep = run_json("limit", "--N", "10,20,40", "--vector", "2,1")
    vals = [i["details"]["residual"] for i in rep["instances"]]
    assert len(vals) == 3
    assert vals[0] > vals[1] > vals[2]


def test_states_value_and_fixed_point():
    rep = run_json("states", "--expr", "q(1) + 2 p(3)", "--t", "1/3")
    by_id = {i["id"]: i for i in rep["instances"]}
    assert by_id["omega-t"]["details"]["value"] == "1/3"
    assert by_id["fixed-point"]["details"]["fixed"] is False


def test_certificate_projection():
    rep = run_json("certificate", "--expr", "a(0) c(0)")
    inst = rep["instances"][0]
    assert inst["discrepancy"] == 1.0
    assert inst["pass"] is True


def test_nonconvergence():
    rep = run_json("nonconvergence", "--n", "4")
    inst = rep["instances"][0]
    assert inst["discrepancy"] == "exact-0"
    assert inst["details"]["witnessEntry"] == -1
    assert inst["details"]["strongResidual"] == "1/4"


def test_commutant_inline_json():
    spec = json.dumps({"case": "N", "window": [1, 1], "particles": 1,
                       "exprs": ["x(1)"], "expect": 2})
    rep = run_json("commutant", "--gens", spec)
    assert rep["instances"][0]["details"]["dim"] == 2


def test_commutant_spec_file(tmp_path):
    spec = {"case": "N", "window": [1, 2], "particles": 2,
            "exprs": ["a(1)", "c(1)", "a(2)", "c(2)"], "expect": 1}
    path = tmp_path / "gens.json"
    path.write_text(json.dumps(spec))
    rep = run_json("commutant", "--gens", str(path))
    assert rep["instances"][0]["pass"] is True


def test_reps_decompose():
    spec = json.dumps({
        "d": 3, "particles": 3, "zeroDim": 0,
        "components": [{"level": 0, "phase": {"re": 0, "im": 1}, "mult": 1},
                       {"level": 1, "phase": {"re": -1, "im": 0}, "mult": 2}]})
    rep = run_json("reps", "decompose", "--spec", spec)
    by_id = {i["id"]: i for i in rep["instances"]}
    found = by_id["components"]["details"]["found"]
    assert [(c["level"], c["mult"]) for c in found] == [(0, 1), (1, 2)]
    assert by_id["residual"]["details"]["residualDim"] == 0


def test_exit_failed_check():
    spec = json.dumps({"case": "N", "window": [1, 1], "particles": 1,
                       "exprs": ["x(1)"], "expect": 5})
    code, out, _ = run_cli("commutant", "--gens", spec)
    assert code == 1
    rep = json.loads(out)
    assert rep["summary"]["failed"] == 1


def test_exit_usage_errors():
    code, _, _ = run_cli("no-such-command")
    assert code == 2
    code, _, _ = run_cli("verify", "--suite", "bogus", "--window", "1..2",
                         "--particles", "1")
    assert code == 2
    code, _, err = run_cli("commutant", "--gens", "/nonexistent/path.json")
    assert code == 2
    assert b"error" in err


def test_exit_parse_error():
    code, _, err = run_cli("rewrite", "--case", "z", "--expr", "c(")
    assert code == 2
    assert b"error" in err


def test_exit_internal_error(monkeypatch, capsys):
    def boom(args):
        raise InternalConsistencyError("dual-route mismatch")
    monkeypatch.setattr(cli, "_cmd_nonconvergence", boom)
    code = cli.main(["nonconvergence", "--n", "4"])
    assert code == 3
    assert "internal consistency" in capsys.readouterr().err


def test_reports_deterministic():
    mask = lambda b: RUNTIME.sub(b'"runtimeMillis": X', b)
    for args in (("rewrite", "--case", "z", "--expr", "q(2) p(1)"),
                 ("moments", "--expr", "x(1)", "--max-order", "8"),
                 ("nonconvergence", "--n", "8")):
        _, first, _ = run_cli(*args)
        _, second, _ = run_cli(*args)
        assert mask(first) == mask(second)
