import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from eigenclose.cli import main as cli_main
from eigenclose.experiments import (ExperimentConfig, exit_status,
                                    run_experiment)
from eigenclose.problems import write_matrix_market


def small_tridiag_config(out_dir="", seed=3):
    return ExperimentConfig(family="tridiag", l_values=(5,), seed=seed,
                            approaches=("rr",), out_dir=str(out_dir))


def test_rows_and_exit_status():
    rows, reports = run_experiment(small_tridiag_config())
    assert len(rows) == 4
    assert {r["status"] for r in rows} == {"verified"}
    assert exit_status(rows) == 0
    assert reports[0][1] == "rr"


def test_results_csv_reproducible(tmp_path):
    d1 = tmp_path / "r1"
    d2 = tmp_path / "r2"
    run_experiment(small_tridiag_config(d1))
    run_experiment(small_tridiag_config(d2))
    b1 = (d1 / "results.csv").read_bytes()
    b2 = (d2 / "results.csv").read_bytes()
    assert b1 == b2
    m1 = json.loads((d1 / "manifest.json").read_text())
    m2 = json.loads((d2 / "manifest.json").read_text())
    m1["config"].pop("out_dir")
    m2["config"].pop("out_dir")
    assert m1 == m2
    assert m1["schema_version"] == 1
    assert "versions" in m1 and "numpy" in m1["versions"]


def test_results_csv_schema(tmp_path):
    run_experiment(small_tridiag_config(tmp_path))
    with open(tmp_path / "results.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4
    for r in rows:
        assert float(r["lam_inf"]) <= float(r["lam_sup"])
        assert r["approach"] == "rr"
        assert int(r["N"]) > 0
    with open(tmp_path / "timings.csv", newline="") as fh:
        trows = list(csv.DictReader(fh))
    assert {t["stage"] for t in trows} >= {"nodes", "total"}


def test_pentadiag_experiment_rows():
    config = ExperimentConfig(family="pentadiag", b100_values=(0.0, 1.0),
                              approaches=("rr",), want_vectors=True, seed=1)
    rows, _ = run_experiment(config)
    by_param = {}
    for r in rows:
        by_param.setdefault(r["param"], []).append(r)
    assert {r["status"] for r in by_param["0.0"]} == {"eigenvalue_only"}
    assert {r["status"] for r in by_param["1.0"]} == {"verified"}
    assert exit_status(rows) == 2


def test_cli_solve_roundtrip(tmp_path):
    a = np.diag([0.9, 1.0, 1.1, 5.0])
    b = np.eye(4)
    pa = tmp_path / "a.mtx"
    pb = tmp_path / "b.mtx"
    write_matrix_market(pa, a)
    write_matrix_market(pb, b)
    out = tmp_path / "out"
    code = cli_main(["solve", "--matrix-a", str(pa), "--matrix-b", str(pb),
                     "--interval", "0.85,1.15", "--m", "3", "--L", "3",
                     "--M", "1", "--seed", "2", "--out", str(out)])
    assert code == 0
    with open(out / "results.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 3
    lows = [float(r["lam_inf"]) for r in rows]
    highs = [float(r["lam_sup"]) for r in rows]
    for target, lo, hi in zip((0.9, 1.0, 1.1), lows, highs):
        assert lo <= target <= hi


def test_cli_config_error(tmp_path):
    code = cli_main(["solve", "--matrix-a", str(tmp_path / "missing.mtx"),
                     "--matrix-b", str(tmp_path / "missing.mtx"),
                     "--interval", "0,1", "--m", "1", "--L", "1", "--M", "1"])
    assert code == 3


def test_cli_bad_args():
    assert cli_main(["solve", "--interval", "0,1"]) == 3


def test_cli_verification_failure(tmp_path):
    # wrong declared count: typed verification failure, exit 4
    a = np.diag([0.9, 1.0, 1.1, 5.0])
    b = np.eye(4)
    pa = tmp_path / "a.mtx"
    pb = tmp_path / "b.mtx"
    write_matrix_market(pa, a)
    write_matrix_market(pb, b)
    code = cli_main(["solve", "--matrix-a", str(pa), "--matrix-b", str(pb),
                     "--interval", "0.85,1.15", "--m", "2", "--L", "2",
                     "--M", "1"])
    assert code == 4


def test_cli_selftest_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "eigenclose.cli", "selftest"],
        capture_output=True, text=True, timeout=600)
    assert proc.returncode == 0
    assert "PASS" in proc.stdout
    assert "FAIL" not in proc.stdout


def test_config_validation():
    with pytest.raises(Exception):
        ExperimentConfig(family="nonsense")
    with pytest.raises(Exception):
        ExperimentConfig(family="tridiag", approaches=("qr",))
