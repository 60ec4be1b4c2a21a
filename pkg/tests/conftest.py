import numpy as np
import pytest
import scipy.linalg

from eigenclose.problems import gen_tridiag, tridiag_perturbation_method
from eigenclose.verify import verify_hankel, verify_rr

SWEEP_SEED = 12345


def tridiag_gap_method(spec):
    b_diag = np.ascontiguousarray(spec.B.midpoint().diagonal().real)
    return tridiag_perturbation_method(spec.n, b_diag)


def reference_inside_eigs(spec):
    """Unverified dense reference eigenvalues inside [a, b]."""
    a0 = spec.A.midpoint().real
    b0 = spec.B.midpoint().real
    w = scipy.linalg.eigh(a0, b0, eigvals_only=True)
    return w[(w > spec.a) & (w < spec.b)]


def reference_eigh(spec):
    a0 = spec.A.midpoint().real
    b0 = spec.B.midpoint().real
    w, v = scipy.linalg.eigh(a0, b0)
    keep = (w > spec.a) & (w < spec.b)
    return w[keep], v[:, keep]


@pytest.fixture(scope="session")
def tridiag_sweep():
    """Eigenvalue-only verification of the tridiag family, both approaches,
    for the acceptance criteria (shared across tests)."""
    import time

    out = {}
    t_start = time.perf_counter()
    for l_exp in range(5, 11):
        spec = gen_tridiag(l_exp, SWEEP_SEED)
        gm = tridiag_gap_method(spec)
        inside = reference_inside_eigs(spec)
        entry = {"spec": spec, "inside": inside}
        for name, runner in (("rr", verify_rr), ("hankel", verify_hankel)):
            t0 = time.perf_counter()
            pairs, report = runner(spec, want_vectors=False, gap_method=gm)
            entry[name] = {
                "pairs": pairs,
                "report": report,
                "wall": time.perf_counter() - t0,
            }
        out[l_exp] = entry
    out["total_wall"] = time.perf_counter() - t_start
    return out


@pytest.fixture(scope="session")
def tridiag_vector_sweep():
    """Eigenvector verification for l = 5..8, both approaches."""
    out = {}
    for l_exp in range(5, 9):
        spec = gen_tridiag(l_exp, SWEEP_SEED)
        gm = tridiag_gap_method(spec)
        w_ref, v_ref = reference_eigh(spec)
        entry = {"spec": spec, "w_ref": w_ref, "v_ref": v_ref}
        for name, runner in (("rr", verify_rr), ("hankel", verify_hankel)):
            pairs, report = runner(spec, want_vectors=True, gap_method=gm)
            entry[name] = {"pairs": pairs, "report": report}
        out[l_exp] = entry
    return out
