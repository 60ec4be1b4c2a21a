"""Experiment drivers: sweeps over the generated families and file-based
problems, with deterministic CSV/JSON artifacts.

results.csv is byte-reproducible for a fixed config and seed; wall-clock
numbers go to the separate timings.csv, which carries no such guarantee.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import asdict, dataclass, field

import numpy as np

from . import backend as _bk
from .errors import ConfigError, EigencloseError
from .linalg import Bisection
from .moments import ProblemSpec
from .problems import (gen_pentadiag, gen_probe, gen_tridiag,
                       load_matrix_market, tridiag_perturbation_method)
from .verify import verify_hankel, verify_rr

SCHEMA_VERSION = 1

RESULT_COLUMNS = [
    "family", "param", "seed", "approach", "n", "N", "gap_lower",
    "beta_lower", "index", "status", "reason", "lam_inf", "lam_sup",
    "lam_rad", "vec_max_rad", "cluster",
]


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: a problem family plus verification settings."""

    family: str                       # tridiag | pentadiag | file
    l_values: tuple = ()              # tridiag size exponents
    b100_values: tuple = ()           # pentadiag corner entries
    matrix_a: str = ""
    matrix_b: str = ""
    interval: tuple = ()
    m: int = 0
    L: int = 0
    M: int = 0
    delta: float = 1e-15
    seed: int = 0
    approaches: tuple = ("rr", "hankel")
    want_vectors: bool = False
    out_dir: str = ""

    def __post_init__(self):
        if self.family not in ("tridiag", "pentadiag", "file"):
            raise ConfigError(f"unknown family {self.family!r}")
        for app in self.approaches:
            if app not in ("rr", "hankel"):
                raise ConfigError(f"unknown approach {app!r}")


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _pair_rows(config, param, n, approach, pairs, report):
    rows = []
    for p in pairs:
        rows.append({
            "family": config.family,
            "param": _fmt(param),
            "seed": config.seed,
            "approach": approach,
            "n": n,
            "N": report.N_used,
            "gap_lower": _fmt(report.gap_bound),
            "beta_lower": _fmt(report.beta),
            "index": p.index,
            "status": p.status,
            "reason": p.reason,
            "lam_inf": _fmt(p.lam.inf if p.lam is not None else None),
            "lam_sup": _fmt(p.lam.sup if p.lam is not None else None),
            "lam_rad": _fmt(p.lam.rad() if p.lam is not None else None),
            "vec_max_rad": _fmt(float(p.x.radius().max()) if p.x is not None else None),
            "cluster": "+".join(map(str, p.cluster)) if p.cluster else "",
        })
    return rows


def _failure_rows(config, param, n, approach, exc):
    return [{
        "family": config.family, "param": _fmt(param), "seed": config.seed,
        "approach": approach, "n": n, "N": 0, "gap_lower": "",
        "beta_lower": "", "index": 0, "status": "failed",
        "reason": type(exc).__name__, "lam_inf": "", "lam_sup": "",
        "lam_rad": "", "vec_max_rad": "", "cluster": "",
    }]


def _problems(config):
    if config.family == "tridiag":
        for l_exp in config.l_values:
            spec = gen_tridiag(l_exp, config.seed)
            b_diag = np.ascontiguousarray(spec.B.midpoint().diagonal().real)
            yield l_exp, spec, tridiag_perturbation_method(spec.n, b_diag)
    elif config.family == "pentadiag":
        for b100 in config.b100_values:
            yield b100, gen_pentadiag(b100, config.seed), Bisection()
    else:
        a = load_matrix_market(config.matrix_a)
        b = load_matrix_market(config.matrix_b)
        if a.shape[0] != a.shape[1]:
            raise ConfigError("matrix A must be square")
        if a.shape != b.shape:
            raise ConfigError("A and B must have equal shape")
        from .interval import IMatrix
        tag = "real-symmetric" if not (np.iscomplexobj(a) or np.iscomplexobj(b)) \
            else "hermitian"
        v = gen_probe(a.shape[0], config.L, config.seed)
        spec = ProblemSpec(
            A=IMatrix.from_point(a, tag=tag), B=IMatrix.from_point(b, tag=tag),
            a=config.interval[0], b=config.interval[1],
            m=config.m, L=config.L, M=config.M, V=v, delta=config.delta)
        yield "file", spec, Bisection()


def run_experiment(config):
    """Execute the sweep; returns (rows, reports) and writes artifacts."""
    rows = []
    timing_rows = []
    reports = []
    for param, spec, gap_method in _problems(config):
        for approach in config.approaches:
            runner = verify_rr if approach == "rr" else verify_hankel
            try:
                pairs, report = runner(spec, want_vectors=config.want_vectors,
                                       gap_method=gap_method)
            except EigencloseError as exc:
                rows.extend(_failure_rows(config, param, spec.n, approach, exc))
                continue
            reports.append((param, approach, report))
            rows.extend(_pair_rows(config, param, spec.n, approach, pairs, report))
            for stage, seconds in report.timings.items():
                timing_rows.append({
                    "family": config.family, "param": _fmt(param),
                    "approach": approach, "stage": stage,
                    "seconds": repr(seconds),
                })
    if config.out_dir:
        write_artifacts(config, rows, timing_rows)
    return rows, reports


def write_artifacts(config, rows, timing_rows):
    os.makedirs(config.out_dir, exist_ok=True)
    with open(os.path.join(config.out_dir, "results.csv"), "w",
              newline="", encoding="ascii") as fh:
        writer = csv.DictWriter(fh, fieldnames=RESULT_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    with open(os.path.join(config.out_dir, "timings.csv"), "w",
              newline="", encoding="ascii") as fh:
        writer = csv.DictWriter(fh, fieldnames=["family", "param", "approach",
                                                "stage", "seconds"])
        writer.writeheader()
        writer.writerows(timing_rows)
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "config": {k: list(v) if isinstance(v, tuple) else v
                   for k, v in asdict(config).items()},
        "seed": config.seed,
        "versions": _versions(),
    }
    with open(os.path.join(config.out_dir, "manifest.json"), "w",
              encoding="ascii") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _versions():
    import numpy
    import scipy
    out = {"eigenclose": "0.1.0", "numpy": numpy.__version__,
           "scipy": scipy.__version__, "backend": _bk.BACKEND}
    try:
        import numba
        out["numba"] = numba.__version__
    except ImportError:
        out["numba"] = None
    return out


def exit_status(rows):
    """0 all verified, 2 partial, 4 nothing verified / hard failure."""
    statuses = [r["status"] for r in rows]
    if not statuses:
        return 4
    good = sum(s == "verified" for s in statuses)
    if good == len(statuses):
        return 0
    if good or any(s == "eigenvalue_only" for s in statuses):
        return 2
    return 4
