import numpy as np
import pytest
from types import SimpleNamespace

from eigenclose.errors import GapNotCertified, SingularApprox
from eigenclose.interval import IMatrix, RInterval
from eigenclose.linalg import (Bisection, Perturbation, UserGap, approx_solve,
                               hermitian_ldl_inertia, inertia_count,
                               krawczyk_solve, lambda_min_lower_bound,
                               nearest_outside_gap, verify_eigenpairs_small)


def longdouble_solve(a, b):
    """Pivoted LU in 80-bit arithmetic, used as an independent oracle."""
    a = a.astype(np.clongdouble).copy()
    b = b.astype(np.clongdouble).copy()
    n = a.shape[0]
    perm = np.arange(n)
    for k in range(n - 1):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if p != k:
            a[[k, p]] = a[[p, k]]
            b[[k, p]] = b[[p, k]]
        for i in range(k + 1, n):
            m = a[i, k] / a[k, k]
            a[i, k + 1:] -= m * a[k, k + 1:]
            b[i] -= m * b[k]
    x = np.zeros_like(b)
    for i in range(n - 1, -1, -1):
        x[i] = (b[i] - a[i, i + 1:] @ x[i + 1:]) / a[i, i]
    return x


def test_approx_solve_identity_and_diag():
    b = np.arange(6, dtype=float).reshape(3, 2)
    assert np.array_equal(approx_solve(np.eye(3), b), b)
    x = approx_solve(np.diag([2.0]), np.array([[1.0]]))
    assert x[0, 0] == 0.5


def test_approx_solve_residual_small():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((10, 10)) + 10 * np.eye(10)
    b = rng.standard_normal((10, 2))
    x = approx_solve(a, b)
    assert np.linalg.norm(a @ x - b) <= 1e-12 * np.linalg.norm(b)


def test_approx_solve_singular():
    with pytest.raises(SingularApprox):
        approx_solve(np.zeros((2, 2)), np.ones((2, 1)))


def test_krawczyk_identity():
    rng = np.random.default_rng(1)
    b = IMatrix.from_point(rng.standard_normal((5, 2)))
    enc = krawczyk_solve(IMatrix.eye(5), b)
    assert enc.converged
    assert enc.X.contains_matrix(b)
    assert enc.X.radius().max() <= 1e-14 * np.abs(b.midpoint()).max()


def test_krawczyk_diag():
    c = IMatrix.from_point(np.diag([2.0, 4.0]))
    rhs = IMatrix.from_point(np.array([[1.0], [1.0]]))
    enc = krawczyk_solve(c, rhs)
    assert enc.converged
    assert enc.X.contains_point_matrix(np.array([[0.5], [0.25]]))


def test_krawczyk_random_longdouble_oracle():
    rng = np.random.default_rng(2)
    a = rng.standard_normal((20, 20)) + 1j * rng.standard_normal((20, 20)) + 6 * np.eye(20)
    b = rng.standard_normal((20, 2)) + 1j * rng.standard_normal((20, 2))
    enc = krawczyk_solve(IMatrix.from_point(a), IMatrix.from_point(b))
    assert enc.converged
    x = longdouble_solve(a, b)
    assert enc.X.contains_point_matrix(np.asarray(x, dtype=complex))


def test_krawczyk_not_verified_for_singular_interval():
    # interval matrix containing singular members: contraction must fail
    data = np.zeros((1, 1, 4))
    data[0, 0, 0] = -1.0
    data[0, 0, 1] = 1.0
    c = IMatrix(data)
    rhs = IMatrix.from_point(np.array([[1.0]]))
    enc = krawczyk_solve(c, rhs)
    assert not enc.converged
    assert enc.contraction_factor >= 1.0


def test_verify_eigenpairs_diag():
    hlt = IMatrix.from_point(np.diag([1.0, 2.0]), tag="hermitian")
    res = verify_eigenpairs_small(hlt, IMatrix.eye(2))
    assert all(r.verified for r in res)
    assert res[0].lam.contains(1.0) and res[0].lam.width() <= 2e-13
    assert res[1].lam.contains(2.0)


def test_verify_eigenpairs_spd_pair():
    # (H, H) has eigenvalue 1 with full multiplicity: the 1x1 case encloses
    # it; larger cases hit the multiplicity and must flag, never fabricate
    hm1 = IMatrix.from_point(np.array([[2.5]]), tag="hermitian")
    res1 = verify_eigenpairs_small(hm1, hm1)
    assert res1[0].verified and res1[0].lam.contains(1.0)

    rng = np.random.default_rng(3)
    h = rng.standard_normal((3, 3))
    h = h @ h.T + 3 * np.eye(3)
    hm = IMatrix.from_point(h, tag="hermitian")
    res = verify_eigenpairs_small(hm, hm)
    for r in res:
        if r.verified:
            assert r.lam.contains(1.0)
        else:
            assert r.reason == "ClusterNotSeparated"


def test_verify_eigenpairs_constructed_pencil():
    rng = np.random.default_rng(4)
    lam_true = np.array([-1.0, 0.5, 2.0, 7.0])
    x = rng.standard_normal((4, 4)) + 0.5 * np.eye(4)
    b0 = x @ x.T + 4 * np.eye(4)
    # A = B X Lam X^-1 with X the B-orthonormalized eigenvectors
    w, v = np.linalg.eigh(b0)
    b_half = v @ np.diag(np.sqrt(w)) @ v.T
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    xb = np.linalg.solve(b_half, q)           # B-orthonormal columns
    a0 = b0 @ xb @ np.diag(lam_true) @ np.linalg.inv(xb)
    a0 = 0.5 * (a0 + a0.T)
    res = verify_eigenpairs_small(IMatrix.from_point(a0, tag="hermitian"),
                                  IMatrix.from_point(b0, tag="hermitian"))
    got = sorted(r.lam.mid() for r in res if r.verified)
    assert len(got) == 4
    for r in res:
        assert r.verified
    for lam in lam_true:
        assert any(r.lam.contains(lam) for r in res)


def test_verify_eigenpairs_interval_pencil_covers_points():
    # enclosures must hold for every point pencil inside the intervals
    hlt = IMatrix.from_point(np.diag([1.0, 3.0]), tag="hermitian").widen(1e-8)
    h = IMatrix.eye(2).widen(1e-10)
    res = verify_eigenpairs_small(hlt, h)
    assert all(r.verified for r in res)
    assert res[0].lam.width() >= 1e-8          # at least the input width
    for d in (-1e-8, 0.0, 1e-8):
        assert res[0].lam.contains((1.0 + d) / 1.0) or res[0].lam.contains(1.0 + d)


def test_lambda_min_identity():
    assert lambda_min_lower_bound(IMatrix.eye(4)) >= 1 - 1e-12


def test_lambda_min_singular():
    b = IMatrix.from_point(np.diag([1.0, 1.0, 0.0]), tag="hermitian")
    assert lambda_min_lower_bound(b) == 0.0


def test_lambda_min_small_entry():
    b = IMatrix.from_point(np.diag([1.0, 1e-8]), tag="hermitian")
    beta = lambda_min_lower_bound(b)
    assert 0.0 < beta <= 1e-8


def test_lambda_min_below_true_for_diagonals():
    rng = np.random.default_rng(5)
    for _ in range(20):
        d = np.abs(rng.standard_normal(6)) + 1e-6
        b = IMatrix.from_point(np.diag(d), tag="hermitian")
        assert lambda_min_lower_bound(b) <= d.min()


def test_inertia_diag():
    a = IMatrix.from_point(np.diag([1.0, 2.0, 3.0]), tag="hermitian")
    assert inertia_count(a, IMatrix.eye(3), 2.5) == (True, 2)
    assert inertia_count(a, IMatrix.eye(3), 0.0) == (True, 0)


def test_inertia_requires_pd_b():
    a = IMatrix.from_point(np.diag([1.0, 2.0]), tag="hermitian")
    b = IMatrix.from_point(np.diag([1.0, 0.0]), tag="hermitian")
    ok, _ = inertia_count(a, b, 1.5)
    assert not ok


def test_inertia_tridiag_analytic():
    n = 32
    a = np.diag(np.full(n, 2.0)) + np.diag(np.full(n - 1, -1.0), 1) \
        + np.diag(np.full(n - 1, -1.0), -1)
    am = IMatrix.from_point(a, tag="real-symmetric")
    ok, count = inertia_count(am, IMatrix.eye(n), 2.0)
    assert ok
    analytic = 2.0 - 2.0 * np.cos(np.arange(1, n + 1) * np.pi / (n + 1))
    assert count == int((analytic < 2.0).sum()) == 16


def test_inertia_monotone_and_jumps():
    lams = np.array([-2.0, -2.0, 0.5, 3.0])
    a = IMatrix.from_point(np.diag(lams), tag="hermitian")
    b = IMatrix.eye(4)
    counts = [inertia_count(a, b, t)[1] for t in (-3.0, -1.0, 1.0, 4.0)]
    assert counts == [0, 2, 3, 4]


def test_ldl_pivot_straddle_fails():
    a = IMatrix.from_point(np.diag([1.0, 2.0]), tag="hermitian")
    m = a - IMatrix.eye(2).scale(1.0)        # singular shift
    neg, pos, ok = hermitian_ldl_inertia(m.hermitianize())
    assert not ok


def _gap_spec():
    return SimpleNamespace(
        A=IMatrix.from_point(np.diag([1.0, 2.0, 10.0]), tag="hermitian"),
        B=IMatrix.eye(3), a=0.5, b=2.5, m=2)


def test_gap_bisection_diag():
    contour = SimpleNamespace(gamma=1.5, rho=1.0)
    g = nearest_outside_gap(_gap_spec(), contour, Bisection())
    assert 8.0 <= g <= 8.5


def test_gap_perturbation_exact():
    contour = SimpleNamespace(gamma=1.5, rho=1.0)
    eigs = tuple(RInterval.point(x) for x in (1.0, 2.0, 10.0))
    g = nearest_outside_gap(_gap_spec(), contour,
                            Perturbation(eigs, 0.0, 1.0))
    assert g == pytest.approx(8.5, abs=1e-12)


def test_gap_user_value():
    contour = SimpleNamespace(gamma=1.5, rho=1.0)
    assert nearest_outside_gap(_gap_spec(), contour, UserGap(8.0)) == 8.0
    with pytest.raises(GapNotCertified):
        nearest_outside_gap(_gap_spec(), contour, UserGap(0.5))


def test_gap_count_mismatch():
    spec = _gap_spec()
    bad = SimpleNamespace(A=spec.A, B=spec.B, a=0.5, b=2.5, m=3)
    contour = SimpleNamespace(gamma=1.5, rho=1.0)
    with pytest.raises(GapNotCertified):
        nearest_outside_gap(bad, contour, Bisection())


def test_krawczyk_soundness_sample():
    # abridged version of the acceptance oracle equivalence
    rng = np.random.default_rng(6)
    for _ in range(20):
        n = int(rng.integers(2, 12))
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) \
            + 4 * np.sqrt(n) * np.eye(n)
        b = rng.standard_normal((n, 1)) + 1j * rng.standard_normal((n, 1))
        enc = krawczyk_solve(IMatrix.from_point(a), IMatrix.from_point(b))
        assert enc.converged
        x = longdouble_solve(a, b)
        assert enc.X.contains_point_matrix(np.asarray(x, dtype=complex))
