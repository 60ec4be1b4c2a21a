"""Verified linear algebra: enclosed linear solves, small verified
eigenpairs, spectral lower bounds, inertia counts, and gap certification.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import _rops
from . import backend as _bk
from .errors import (ClusterNotSeparated, DimensionMismatch, GapNotCertified,
                     SingularApprox)
from .interval import (CInterval, IMatrix, RInterval, imat_mul,
                       imat_mul_point_left, imat_mul_point_right,
                       inf_norm_sup)


def approx_solve(c, rhs):
    """Floating LU solve with partial pivoting; no rigor claimed."""
    c = np.asarray(c)
    rhs = np.asarray(rhs)
    if c.shape[0] != c.shape[1]:
        raise DimensionMismatch("coefficient matrix must be square")
    try:
        return np.linalg.solve(c, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularApprox(str(exc)) from exc


def approx_inv(c):
    try:
        return np.linalg.inv(np.asarray(c))
    except np.linalg.LinAlgError as exc:
        raise SingularApprox(str(exc)) from exc


@dataclass(frozen=True)
class LinearEnclosure:
    """Enclosure of the solution set of an interval linear system."""

    X: IMatrix
    converged: bool
    contraction_factor: float

    def conj(self):
        d = self.X.data
        out = np.empty_like(d)
        out[..., 0] = d[..., 0]
        out[..., 1] = d[..., 1]
        out[..., 2] = -d[..., 3]
        out[..., 3] = -d[..., 2]
        return LinearEnclosure(IMatrix(out), self.converged, self.contraction_factor)


def finish_krawczyk(x0, e0, g):
    """Assemble the solution enclosure X = x0 + e0 + Neumann-tail box.

    x0: point candidate; e0: enclosure of R(RHS - C x0); g: enclosure of
    I - R C.  For every point system, the solution error y solves
    y = e0_pt + G y, so |y - e0|_inf <= a*|e0|_inf/(1-a) with a = ||G||.
    """
    alpha = inf_norm_sup(g)
    if not alpha < 1.0:
        return LinearEnclosure(e0, False, alpha)
    e0mag = e0.mag_sup()
    col_sup = e0mag.max(axis=0)
    denom = _rops.add_lo(1.0, -alpha)
    tail = np.array([_rops.mul_hi(alpha, _rops.div_hi(s, denom)) for s in col_sup])
    x = IMatrix.from_point(x0) + e0.widen(tail[None, :])
    return LinearEnclosure(x, True, alpha)


def krawczyk_solve(c, rhs):
    """Verified enclosure of {C0^-1 B0 : C0 in c, B0 in rhs}.

    Dense interval Krawczyk: one approximate inverse of midpoint(c), full
    interval product I - R c.  Intended for moderate dimensions; the
    quadrature-node path uses the structured variant in `moments`.
    """
    if c.rows != c.cols:
        raise DimensionMismatch("coefficient matrix must be square")
    if c.rows != rhs.rows:
        raise DimensionMismatch("rhs row count mismatch")
    cmid = c.midpoint()
    try:
        r = approx_inv(cmid)
        # backward-stable candidate: residual free of condition amplification
        x0 = approx_solve(cmid, rhs.midpoint())
    except SingularApprox:
        return LinearEnclosure(rhs, False, np.inf)
    resid = rhs - imat_mul_point_right(c, x0)
    e0 = imat_mul_point_left(r, resid)
    g = IMatrix.eye(c.rows) - imat_mul_point_left(r, c)
    return finish_krawczyk(x0, e0, g)


# ---------------------------------------------------------------------------
# inertia / definiteness via verified LDL^H


def imatrix_bandwidth(m):
    """Largest |i - j| whose entry is not exactly zero."""
    d = m.data
    nz = (d[..., 0] != 0.0) | (d[..., 1] != 0.0) | (d[..., 2] != 0.0) | (d[..., 3] != 0.0)
    idx = np.argwhere(nz)
    if idx.size == 0:
        return 0
    return int(np.max(np.abs(idx[:, 0] - idx[:, 1])))


def hermitian_ldl_inertia(m, bw=None):
    """(neg, pos, ok) pivot signs of an LDL^H elimination of a Hermitian
    interval matrix; valid for every Hermitian point member.  ok=False when
    a pivot interval straddles zero (no pivoting is performed)."""
    if m.rows != m.cols:
        raise DimensionMismatch("inertia needs a square matrix")
    if bw is None:
        bw = imatrix_bandwidth(m)
    scratch = m.data.copy()
    scratch.flags.writeable = True
    neg, pos, ok = _bk.k_ldl_pivot_signs(scratch, bw)
    return int(neg), int(pos), bool(ok)


def is_positive_definite(b, bw=None):
    neg, pos, ok = hermitian_ldl_inertia(b, bw)
    return ok and neg == 0 and pos == b.rows


def lambda_min_lower_bound(b):
    """Rigorous beta >= 0 with lambda_min(B0) > beta for every Hermitian
    point B0 in b; returns 0.0 when positive definiteness cannot be
    certified."""
    n = b.rows
    bw = imatrix_bandwidth(b)
    eye = IMatrix.eye(n)

    def certified(beta):
        shifted = b - eye.scale(CInterval.point(beta))
        return is_positive_definite(shifted, bw)

    if not certified(0.0):
        return 0.0
    hi = float(np.min(b.data[np.arange(n), np.arange(n), 1]))
    if hi <= 0.0:
        return 0.0
    lo = 0.0
    for _ in range(90):
        mid = lo + 0.5 * (hi - lo)
        if mid <= lo or mid >= hi:
            break
        if certified(mid):
            lo = mid
        else:
            hi = mid
    return lo


def inertia_count(a, b, t):
    """(verified, count): eigenvalues of the pencil (a, b) below t, by
    Sylvester's law on a verified factorization of a - t b; requires
    certified positive definite b."""
    if not is_positive_definite(b):
        return False, 0
    neg, ok = _negcount_shifted(a, b, float(t))
    return ok, neg


def _negcount_shifted(a, b, t, bw=None):
    m = (a - b.scale(CInterval.point(t))).hermitianize()
    neg, pos, ok = hermitian_ldl_inertia(m, bw)
    if ok:
        return neg, True
    return _negcount_projected(m)


def _negcount_projected(m):
    """Negative eigenvalue count of a Hermitian interval matrix via
    congruence with a floating eigenbasis.

    inertia(M) = inertia(V^H M V) for nonsingular V; with V from a
    floating eigendecomposition of midpoint(M) the projected interval
    matrix is nearly diagonal and Gershgorin discs certify the signs
    without any interval elimination (no width growth).  Plain
    midpoint-radius arithmetic with generous inflation suffices here: the
    disc slack is dominated by the eigenbasis defect, not rounding.
    """
    n = m.rows
    u1 = 2.0 ** -53 * 1.000001
    gk = 1.5 * (n + 4) * u1
    m_mid = m.midpoint()
    m_rad = m.radius()
    m0 = 0.5 * (m_mid + m_mid.conj().T)
    try:
        _, v = scipy.linalg.eigh(m0)
    except (np.linalg.LinAlgError, ValueError):
        return 0, False
    vh = np.ascontiguousarray(v.conj().T)
    av = np.abs(v)

    def cabs(x):
        return np.abs(x.real) + np.abs(x.imag)

    s1 = m_mid @ v
    s1_rad = gk * (cabs(m_mid) @ av) + m_rad @ av * (1.0 + gk) + 1e-300
    s = vh @ s1
    s_rad = gk * (av.T @ cabs(s1)) + av.T @ s1_rad * (1.0 + gk) + 1e-300
    # V nonsingular when V^H V is Gershgorin-dominant
    g = vh @ v
    g_rad = gk * (av.T @ av) + 1e-300
    g_total = cabs(g) + g_rad
    idx = np.arange(n)
    g_off = g_total.sum(axis=1) - g_total[idx, idx]
    if not (g[idx, idx].real - g_rad[idx, idx] - g_off > 0.0).all():
        return 0, False
    s_total = cabs(s) + s_rad
    disc = s_total.sum(axis=1) - s_total[idx, idx] \
        + np.abs(s[idx, idx].imag) + 2.0 * s_rad[idx, idx]
    centers = s[idx, idx].real
    lo = centers - disc
    hi = centers + disc
    if ((lo <= 0.0) & (hi >= 0.0)).any():
        return 0, False
    return int((hi < 0.0).sum()), True


# ---------------------------------------------------------------------------
# gap certification strategies


@dataclass(frozen=True)
class Bisection:
    """Outward scan from the interval endpoints in rho/4 increments with a
    terminal bisection refinement inside the first failing increment.

    Uses inertia-count differences of A - tB, which count pencil
    eigenvalues in [t1, t2) for any regular Hermitian pencil with B
    positive semidefinite (det(A - tB) vanishes exactly at finite pencil
    eigenvalues and the crossing direction is fixed by B >= 0)."""

    max_steps: int = 100
    refine_steps: int = 60


@dataclass(frozen=True)
class Perturbation:
    """Gap from rigorous eigenvalue enclosures of A plus the bound
    |lambda_i(A) - lambda_i| <= |lambda_i(A)| * ||I - B||_2 * ||B||_2."""

    eig_enclosures: tuple
    delta_b_sup: float
    b_norm_sup: float


@dataclass(frozen=True)
class UserGap:
    """Caller-supplied lower bound, used as-is."""

    value: float


def nearest_outside_gap(spec, contour, method):
    """Rigorous lower bound g <= |lambda_hat - gamma| over the eigenvalues
    outside [a, b]; raises GapNotCertified when g > rho cannot be shown."""
    from . import backend as _bk

    if isinstance(method, UserGap):
        g = float(method.value)
    elif isinstance(method, Perturbation):
        g = _gap_perturbation(spec, contour, method)
    elif isinstance(method, Bisection):
        with _bk.blas_threads(1):
            g = _gap_bisection(spec, contour, method)
    else:
        raise TypeError(f"unknown gap method {method!r}")
    if not g > contour.rho:
        raise GapNotCertified(
            f"certified gap {g} does not exceed contour radius {contour.rho}")
    return g


def _gap_perturbation(spec, contour, method):
    gamma = contour.gamma
    slack = RInterval.point(method.delta_b_sup) * RInterval.point(method.b_norm_sup)
    inside = 0
    g = np.inf
    for lam in method.eig_enclosures:
        pert = (abs(lam) * slack).sup
        enc = lam.widened(pert)
        if enc.inf > spec.a and enc.sup < spec.b:
            inside += 1
        elif enc.sup < spec.a or enc.inf > spec.b:
            dist = (enc - RInterval.point(gamma)).mig()
            g = min(g, dist)
        else:
            raise GapNotCertified(
                f"eigenvalue enclosure {enc!r} straddles an endpoint of omega")
    if inside != spec.m:
        raise GapNotCertified(
            f"perturbation method certifies {inside} inside eigenvalues, expected {spec.m}")
    if not np.isfinite(g):
        raise GapNotCertified("no outside eigenvalues found by perturbation method")
    return g


def _gap_bisection(spec, contour, method):
    a, b = spec.a, spec.b
    gamma, rho = contour.gamma, contour.rho
    bw = max(imatrix_bandwidth(spec.A), imatrix_bandwidth(spec.B))
    cache = {}

    def count(t):
        if t not in cache:
            cache[t] = _negcount_shifted(spec.A, spec.B, t, bw)
        return cache[t]

    na, ok_a = count(a)
    nb, ok_b = count(b)
    if not (ok_a and ok_b):
        raise GapNotCertified("inertia count failed at an interval endpoint")
    if nb - na != spec.m:
        raise GapNotCertified(
            f"inertia counts certify {nb - na} eigenvalues in omega, expected {spec.m}")

    step = rho / 4.0

    def scan(start, ref_count, direction):
        t = start
        for _ in range(method.max_steps):
            u = t + direction * step
            c, ok = count(u)
            if ok and c == ref_count:
                t = u
            else:
                break
        else:
            return t
        lo, hi = t, t + direction * step
        for _ in range(method.refine_steps):
            mid = lo + 0.5 * (hi - lo)
            if mid == lo or mid == hi:
                break
            c, ok = count(mid)
            if ok and c == ref_count:
                lo = mid
            else:
                hi = mid
        return lo

    t_r = scan(b, nb, +1.0)
    t_l = scan(a, na, -1.0)
    return min(_rops.add_lo(gamma, -t_l), _rops.add_lo(t_r, -gamma))


# ---------------------------------------------------------------------------
# verified eigenpairs of small Hermitian interval pencils


@dataclass(frozen=True)
class SmallEigEnclosure:
    """Verified eigenpair of a small interval pencil (lam, y); when
    verified, every point pencil in the input has exactly one eigenpair in
    the enclosure (eigenvector normalized to 1 at its anchor component)."""

    lam: RInterval
    y: IMatrix
    verified: bool
    reason: str = ""
    lam_complex: CInterval = field(default=None, repr=False)


def floating_eig_seeds(hlt, h):
    """Unverified midpoint eigenpairs, sorted by real part."""
    a0 = hlt.midpoint()
    b0 = h.midpoint()
    a0 = 0.5 * (a0 + a0.conj().T)
    b0 = 0.5 * (b0 + b0.conj().T)
    try:
        w, v = scipy.linalg.eigh(a0, b0)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, ValueError):
        w, v = scipy.linalg.eig(a0, b0)
        order = np.argsort(w.real)
        w, v = w[order], v[:, order]
    return [(complex(w[i]), np.asarray(v[:, i], dtype=np.complex128))
            for i in range(len(w))]


def verify_eigenpairs_small(hlt, h, seeds=None):
    """Krawczyk enclosures of eigenpairs of the interval pencil (hlt, h)
    from floating seeds, one per seed; unverifiable seeds are flagged."""
    if hlt.shape != h.shape or hlt.rows != hlt.cols:
        raise DimensionMismatch("pencil matrices must be square, same shape")
    if seeds is None:
        seeds = floating_eig_seeds(hlt, h)
    m = hlt.rows
    scale = max(abs(complex(mu)) for mu, _ in seeds) or 1.0
    mus = sorted(complex(mu).real for mu, _ in seeds)
    tight = set()
    for i in range(len(mus) - 1):
        if abs(mus[i + 1] - mus[i]) < 1e-10 * scale:
            tight.add(mus[i])
            tight.add(mus[i + 1])

    out = []
    for mu0, y0 in seeds:
        res = _krawczyk_eigenpair(hlt, h, complex(mu0), y0)
        if res is None:
            reason = ("ClusterNotSeparated"
                      if complex(mu0).real in tight else "KrawczykContractionFailed")
            out.append(SmallEigEnclosure(
                lam=RInterval.point(complex(mu0).real), y=IMatrix.zeros(m, 1),
                verified=False, reason=reason))
        else:
            lam_c, yenc = res
            out.append(SmallEigEnclosure(
                lam=lam_c.re, y=yenc, verified=True, lam_complex=lam_c))
    return out


def _krawczyk_eigenpair(hlt, h, mu0, y0, max_sweeps=15):
    """Single-seed Krawczyk iteration on (hlt - mu h) y = 0, y_k = 1.

    Unknowns: the m-1 free components of y and mu, all complex.  Returns
    (mu enclosure, y enclosure) or None.
    """
    m = hlt.rows
    k = int(np.argmax(np.abs(y0)))
    if y0[k] == 0:
        return None
    y0 = np.asarray(y0, dtype=np.complex128) / y0[k]
    free = [i for i in range(m) if i != k]

    h_mid = h.midpoint()
    t_mid = hlt.midpoint() - mu0 * h_mid
    j0 = np.zeros((m, m), dtype=np.complex128)
    j0[:, :m - 1] = t_mid[:, free]
    j0[:, m - 1] = -(h_mid @ y0)
    try:
        r = np.linalg.inv(j0)
    except np.linalg.LinAlgError:
        return None

    t0 = hlt - h.scale(CInterval.point(mu0))
    f0 = imat_mul_point_right(t0, y0.reshape(m, 1))
    z = -imat_mul_point_left(r, f0)

    e = z.widen(np.maximum(1e-3 * z.mag_sup(), 1e-300))
    for _ in range(max_sweeps):
        mu_err = e.entry(m - 1, 0)
        mu_enc = CInterval.point(mu0) + mu_err
        yenc = _embed_free(e.data, y0, free, k)
        t = hlt - h.scale(mu_enc)
        hy = imat_mul(h, yenc)
        jd = np.empty((m, m, 4))
        jd[:, :m - 1, :] = t.data[:, free, :]
        jd[:, m - 1, :] = (-hy).data[:, 0, :]
        jt = IMatrix(jd)
        g = IMatrix.eye(m) - imat_mul_point_left(r, jt)
        kbox = z + imat_mul(g, e)
        if _strictly_inside(kbox, e):
            mu_err = kbox.entry(m - 1, 0)
            mu_enc = CInterval.point(mu0) + mu_err
            yenc = _embed_free(kbox.data, y0, free, k)
            return mu_enc, yenc
        hull = _hull(kbox, e)
        e = hull.widen(np.maximum(0.1 * hull.mag_sup(), 1e-300))
    return None


def _embed_free(e_data, y0, free, k):
    m = len(y0)
    d = np.zeros((m, 1, 4))
    d[k, 0, 0] = d[k, 0, 1] = 1.0
    for pos, i in enumerate(free):
        d[i, 0, 0] = _rops.add_lo(y0[i].real, e_data[pos, 0, 0])
        d[i, 0, 1] = _rops.add_hi(y0[i].real, e_data[pos, 0, 1])
        d[i, 0, 2] = _rops.add_lo(y0[i].imag, e_data[pos, 0, 2])
        d[i, 0, 3] = _rops.add_hi(y0[i].imag, e_data[pos, 0, 3])
    return IMatrix(d)


def _strictly_inside(inner, outer):
    a, b = inner.data, outer.data
    return bool((a[..., 0] > b[..., 0]).all() and (a[..., 1] < b[..., 1]).all()
                and (a[..., 2] > b[..., 2]).all() and (a[..., 3] < b[..., 3]).all())


def _hull(a, b):
    d = np.empty_like(a.data)
    d[..., 0] = np.minimum(a.data[..., 0], b.data[..., 0])
    d[..., 1] = np.maximum(a.data[..., 1], b.data[..., 1])
    d[..., 2] = np.minimum(a.data[..., 2], b.data[..., 2])
    d[..., 3] = np.maximum(a.data[..., 3], b.data[..., 3])
    return IMatrix(d)
