import json

import numpy as np
import pytest

from dst.cli import main
from dst.errors import ConfigError
from dst.fileio import save_matrix
from dst.rng import Rng
from dst.suites import SUITE_NAMES, SuiteConfig, run_suite

SMALL = SuiteConfig(dims=(2, 4), trials=2, seed=7)


@pytest.mark.parametrize("name", SUITE_NAMES)
def test_each_suite_passes_small_config(name):
    cfg = SMALL if name != "laplacian" else SuiteConfig(dims=(2, 4), trials=2, seed=7, laplacian_ns=(8,))
    report = run_suite(name, cfg)
    failed = [c.case_id for c in report.cases if not c.passed]
    assert report.passed, failed


def test_reports_are_reproducible():
    r1 = run_suite("deformed", SMALL)
    r2 = run_suite("deformed", SMALL)
    assert r1.to_obj() == r2.to_obj()


def test_jobs_do_not_change_the_report():
    cfg2 = SuiteConfig(dims=(2, 4), trials=2, seed=7, jobs=3)
    assert run_suite("adjoint", SMALL).to_obj() == run_suite("adjoint", cfg2).to_obj()


def test_corrupt_gram_negative_control():
    cfg = SuiteConfig(dims=(2,), trials=2, seed=7, corrupt_gram=True)
    report = run_suite("kuelbs", cfg)
    assert not report.passed


def test_unknown_suite_and_tolerance():
    with pytest.raises(ConfigError):
        run_suite("nope", SMALL)
    with pytest.raises(ConfigError):
        SMALL.tolerance("nope.key")


# ---------------------------------------------------------------- CLI


def write_matrix(tmp_path, m, name="a.json"):
    path = tmp_path / name
    save_matrix(m, str(path))
    return str(path)


def test_cli_polar_and_deformed(tmp_path, capsys):
    path = write_matrix(tmp_path, np.diag([-2.0, -1.0]).astype(complex))
    assert main(["polar", "--input", path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["rank"] == 2
    assert out["residual_ut"] <= 1e-12

    out_path = str(tmp_path / "f.json")
    assert main(["deformed", "--input", path, "--out", out_path]) == 0
    obj = json.loads(open(out_path).read())
    assert obj["support"] == [1.0, 2.0]


def test_cli_funcalc(tmp_path, capsys):
    path = write_matrix(tmp_path, np.diag([-2.0, -1.0]).astype(complex))
    assert main(["funcalc", "--input", path, "--g", "lambda^2"]) == 0
    out = json.loads(capsys.readouterr().out)
    entries = out["result"]["entries"]
    assert entries[0] == [-4.0, 0.0]
    assert entries[3] == [-1.0, 0.0]


def test_cli_funcalc_bad_expression(tmp_path, capsys):
    path = write_matrix(tmp_path, np.eye(2, dtype=complex))
    assert main(["funcalc", "--input", path, "--g", "2lambda"]) == 1


def test_cli_kuelbs_and_adjoint(tmp_path, capsys):
    assert main(["kuelbs", "--p", "3", "--dim", "8", "--seed", "7"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["gram_min_eig"] > 0
    assert out["continuity_excess"] <= 1e-12

    path = write_matrix(tmp_path, Rng(401).matrix(8, 8))
    assert main(["adjoint", "--input", path, "--p", "3", "--dim", "8"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["involution_residual"] <= 1e-10
    assert out["accretive_min"] >= -1e-10


def test_cli_baire_csv(tmp_path, capsys):
    path = write_matrix(tmp_path, Rng(402).matrix(4, 4))
    csv_path = str(tmp_path / "curve.csv")
    assert main(["baire", "--input", path, "--p", "3", "--lambdas", "1e1,1e2,1e3", "--csv", csv_path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["all_below_bound"] is True
    lines = open(csv_path).read().strip().splitlines()
    assert lines[0] == "lambda,max_error,bound"
    assert len(lines) == 4


def test_cli_demo_laplacian(capsys):
    assert main(["demo", "laplacian", "--n", "8", "--r", "3"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["contract_residual"] <= 1e-9
    assert out["inverse_norm"] <= 1.0 + 1e-9


def test_cli_verify_deterministic_and_exit_codes(tmp_path, capsys):
    args = [
        "verify", "--suite", "kuelbs", "--dims", "2,4", "--trials", "2",
        "--seed", "42", "--no-timestamp",
    ]
    r1 = str(tmp_path / "r1.json")
    r2 = str(tmp_path / "r2.json")
    assert main(args + ["--report", r1]) == 0
    assert main(args + ["--report", r2]) == 0
    assert open(r1, "rb").read() == open(r2, "rb").read()
    capsys.readouterr()

    assert main(args + ["--report", str(tmp_path / "r3.json"), "--corrupt-gram"]) == 1


def test_cli_verify_tol_override(tmp_path, capsys):
    args = [
        "verify", "--suite", "deformed", "--dims", "2", "--trials", "1", "--seed", "1",
        "--no-timestamp", "--tol", "deformed.reconstruction=1e-30",
        "--report", str(tmp_path / "r.json"),
    ]
    assert main(args) == 1  # absurd tolerance forces a failure
    capsys.readouterr()


def test_cli_bad_inputs(tmp_path, capsys):
    missing = str(tmp_path / "missing.json")
    assert main(["polar", "--input", missing]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    assert main(["polar", "--input", str(bad)]) == 1
    capsys.readouterr()


def test_cli_baire_lambda_cap(tmp_path, capsys):
    path = write_matrix(tmp_path, Rng(403).matrix(3, 3))
    assert main(["baire", "--input", path, "--lambdas", "1e1,1e9"]) == 1
    assert "error:" in capsys.readouterr().err


def test_cli_mtx_input(tmp_path, capsys):
    path = tmp_path / "m.mtx"
    path.write_text("%%MatrixMarket matrix array real general\n2 2\n3\n0\n0\n4\n")
    assert main(["polar", "--input", str(path)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["rank"] == 2
