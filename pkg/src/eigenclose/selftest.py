"""Quick self-checks behind `eigenclose selftest` (abridged invariants)."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .interval import IMatrix, RInterval, imat_mul, r_add, r_div, r_mul, r_sub
from .moments import ProblemSpec, d_factor_oracle
from .verify import verify_hankel, verify_rr


def _check(name, ok):
    print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return bool(ok)


def _scalar_fuzz(count=20000, seed=2024):
    rng = np.random.default_rng(seed)
    ok = True
    for _ in range(count):
        a, b, c, d = rng.standard_normal(4) * 10.0 ** rng.integers(-3, 4)
        x = RInterval(min(a, b), max(a, b))
        y = RInterval(min(c, d), max(c, d))
        fa = [Fraction(v) for v in (rng.uniform(x.inf, x.sup),
                                    rng.uniform(y.inf, y.sup))]
        fa = [max(min(f, Fraction(up)), Fraction(lo)) for f, lo, up in
              zip(fa, (x.inf, y.inf), (x.sup, y.sup))]
        px, py = fa
        s = r_add(x, y)
        if not Fraction(s.inf) <= px + py <= Fraction(s.sup):
            ok = False
        m = r_mul(x, y)
        if not Fraction(m.inf) <= px * py <= Fraction(m.sup):
            ok = False
        d_ = r_sub(x, y)
        if not Fraction(d_.inf) <= px - py <= Fraction(d_.sup):
            ok = False
        if y.inf > 0 or y.sup < 0:
            q = r_div(x, y)
            if not Fraction(q.inf) <= px / py <= Fraction(q.sup):
                ok = False
    return ok


def _d_factor_trend():
    ok = True
    prev_in = prev_out = None
    for n_nodes in (8, 16, 32, 64):
        din = abs(d_factor_oracle(2.2, 2.0, 0.5, n_nodes, True) - 1.0)
        dout = abs(d_factor_oracle(3.0, 2.0, 0.5, n_nodes, False))
        if prev_in is not None and not (din < prev_in and dout < prev_out):
            ok = False
        prev_in, prev_out = din, dout
    return ok and prev_in < 1e-12 and prev_out < 1e-12


def _small_end_to_end():
    rng = np.random.default_rng(11)
    a = IMatrix.from_point(np.diag([0.9, 1.0, 1.1, 5.0]), tag="real-symmetric")
    spec = ProblemSpec(A=a, B=IMatrix.eye(4), a=0.85, b=1.15, m=3, L=3, M=1,
                       V=rng.standard_normal((4, 3)))
    targets = [0.9, 1.0, 1.1]
    ok = True
    for runner in (verify_rr, verify_hankel):
        pairs, _ = runner(spec, want_vectors=True)
        for p, t in zip(pairs, targets):
            if p.status != "verified" or not p.lam.contains(t):
                ok = False
    return ok


def run_selftest():
    checks = [
        ("interval containment fuzz (2e4 ops)", _scalar_fuzz()),
        ("filter factor convergence", _d_factor_trend()),
        ("identity matrix product", imat_mul(
            IMatrix.eye(3), IMatrix.eye(3)).contains_matrix(IMatrix.eye(3))),
        ("small end-to-end verification", _small_end_to_end()),
    ]
    bad = sum(not _check(name, ok) for name, ok in checks)
    return 0 if bad == 0 else 4
