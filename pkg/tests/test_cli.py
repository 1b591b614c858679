import json
import subprocess
import sys
from pathlib import Path

import pytest

from symcurv import cli
from symcurv.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# -- analyze ---------------------------------------------------------------------


def test_analyze_builtin(capsys):
    code, out, _ = run(capsys, "analyze", "r40", "--samples", 2)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1
    assert doc["ell"] == ["1", "0", "0", "0"]
    assert doc["ricci"][3][3] == "-2/9"
    assert doc["flags"]["preferred"] is False
    assert len(doc["sectional_samples"]) == 2


def test_analyze_file(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "aff1c.json")
    assert code == 0 and json.loads(out)["algebra"]["exact"] is True


def test_analyze_flat_file(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "abelian4.json")
    doc = json.loads(out)
    assert code == 0 and doc["trichotomy"] == "flat"


def test_analyze_parse_error(capsys, tmp_path):
    bad = tmp_path / "odd.json"
    bad.write_text(json.dumps({"dim": 3, "brackets": [], "omega": []}))
    assert run(capsys, "analyze", bad)[0] == 2
    assert run(capsys, "analyze", tmp_path / "missing.json")[0] == 2


def test_analyze_invalid_algebra(capsys):
    code, _, err = run(capsys, "analyze", DATA / "broken_jacobi.json")
    assert code == 3 and "jacobi" in err


def test_analyze_degenerate_omega(capsys, tmp_path):
    f = tmp_path / "degenerate.json"
    f.write_text(json.dumps({"dim": 2, "brackets": [], "omega": [["0", "0"], ["0", "0"]]}))
    code, _, err = run(capsys, "analyze", f)
    assert code == 3 and "nondegenerate" in err


# -- examples --------------------------------------------------------------------


def test_examples_r40_all_pass(capsys):
    code, out, _ = run(capsys, "examples", "r40")
    assert code == 0 and out.strip().endswith("29/29 checks match")


def test_examples_aff_reports_mismatches(capsys):
    code, out, _ = run(capsys, "examples", "aff1c")
    assert code == 1
    assert out.count("FAIL") == 5
    assert "expected:" in out and "computed:" in out


def test_examples_unknown(capsys):
    assert run(capsys, "examples", "nope")[0] == 2


# -- verify ----------------------------------------------------------------------


def test_verify_dim2_flat_only(capsys):
    code, out, _ = run(capsys, "verify", "--dims", "2", "--trials", 0)
    assert code == 0 and json.loads(out)["failures"] == []


def test_verify_reports_failures(capsys):
    code, out, err = run(capsys, "verify", "--dims", "4", "--trials", 2, "--seed", 3)
    assert code == 1
    doc = json.loads(out)
    fail = doc["failures"][0]
    assert fail["first"]["sample"] == "random:3:0"
    assert set(fail["by_identity"]) == {
        "curvature_divergence", "divw1", "divw_skew", "nablarho", "nablarho_weyl",
    }
    derived = {s["name"]: s["derived"] for s in doc["summaries"] if s["failures"]}
    assert derived["curvature_divergence"] == ["1", "-2"]
    assert "dim 4" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--dims", "3"],
        ["verify", "--dims", "x"],
        ["verify", "--trials", "-1"],
        ["verify", "--bogus"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_verify_deterministic(capsys):
    first = run(capsys, "verify", "--dims", "4", "--trials", 3, "--seed", 7)
    second = run(capsys, "verify", "--dims", "4", "--trials", 3, "--seed", 7)
    assert first == second


def test_seed_from_environment(capsys, monkeypatch):
    explicit = run(capsys, "verify", "--dims", "2", "--trials", 2, "--seed", 11)
    monkeypatch.setenv("SYMCURV_SEED", "11")
    from_env = run(capsys, "verify", "--dims", "2", "--trials", 2)
    assert explicit == from_env
    monkeypatch.setenv("SYMCURV_SEED", "eleven")
    assert run(capsys, "verify")[0] == 2


# -- submanifold -----------------------------------------------------------------


def test_submanifold_file(capsys):
    code, out, _ = run(capsys, "submanifold", DATA / "linear_inclusion.json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] == doc["total"] == 1


def test_submanifold_random(capsys):
    code, out, _ = run(capsys, "submanifold", "--random", 2, 3, 2, "--tangential")
    doc = json.loads(out)
    assert code == 0 and doc["total"] == 2
    assert doc["reports"][0]["hereditary_derived_holds"] is True


def test_submanifold_degenerate(capsys):
    assert run(capsys, "submanifold", DATA / "nonsymplectic_embedding.json")[0] == 3


@pytest.mark.parametrize("argv", [[], ["--random", 3, 2, 1], ["missing.json"]])
def test_submanifold_usage(capsys, argv):
    assert run(capsys, "submanifold", *argv)[0] == 2


def test_submanifold_failed_check(capsys, monkeypatch):
    # the identities are theorems; force a failing report to exercise exit 1
    real = cli.gauss_check

    def broken(*args, **kwargs):
        rep = real(*args, **kwargs)
        rep.gauss_residual_zero = False
        return rep

    monkeypatch.setattr(cli, "gauss_check", broken)
    code, out, _ = run(capsys, "submanifold", DATA / "linear_inclusion.json")
    assert code == 1 and json.loads(out)["passed"] == 0


# -- jacobi ----------------------------------------------------------------------


def test_jacobi_default(capsys):
    code, out, _ = run(capsys, "jacobi", "aff1c")
    doc = json.loads(out)
    assert code == 0
    assert doc["report"]["second_derivative_residual"] <= 1e-6
    assert doc["report"]["npc_sampled"] is False


def test_jacobi_flat_lemma(capsys):
    code, out, _ = run(capsys, "jacobi", DATA / "abelian4.json", "--T", 1.0)
    doc = json.loads(out)
    assert code == 0 and doc["report"]["lemma_holds"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["r40", "--h", "0"],
        ["r40", "--T", "0.001", "--h", "0.001"],
        ["r40", "--v0", "1,2"],
        ["r40", "--j0", "1,2,x,4"],
        ["nope"],
    ],
)
def test_jacobi_usage(capsys, argv):
    assert run(capsys, "jacobi", *argv)[0] == 2


def test_jacobi_invalid_algebra(capsys):
    assert run(capsys, "jacobi", DATA / "broken_jacobi.json")[0] == 3


def test_jacobi_blow_up(capsys):
    code, _, err = run(capsys, "jacobi", "r40", "--v0", "0,0,0,1", "--T", 4, "--h", "0.01")
    assert code == 4 and "blow-up" in err


def test_console_script_entry():
    out = subprocess.run(
        [sys.executable, "-m", "symcurv.cli", "examples", "r40"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert out.returncode == 0
