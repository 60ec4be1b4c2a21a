"""Quadrature contour, node solves, moment assembly, and truncation bounds.

The N-point trapezoidal rule on the circle |z - gamma| = rho discretizes the
k-th complex moment with node weights rho^(k+1) exp(i(k+1)theta_j)/N.  The
assembled transformation blocks and reduced moments therefore satisfy the
filter-function identities exactly, and the truncation bounds below apply to
them without rescaling.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels_numpy as _knp
from . import _rops
from . import backend as _bk
from .errors import (ConfigError, DimensionMismatch, GapNotCertified,
                     NodeSolveFailed, OnContour, PositiveDefiniteRequired)
from .interval import (CInterval, IMatrix, RInterval, enclose_sincos,
                       enclose_pi, fro_norm_sup, gemm_enclosure, imat_mul,
                       imat_mul_point_left, imat_mul_point_right,
                       point_bandwidth, rowscale_enclosure)
from .linalg import LinearEnclosure, krawczyk_solve

_U = 2.0 ** -53


@dataclass(frozen=True)
class ProblemSpec:
    """Pencil, target interval, and block configuration.

    A, B: Hermitian interval matrices (B positive semidefinite);
    [a, b]: target interval containing exactly m eigenvalues;
    L, M: probe width and moment order with L*M = m;
    V: point probe matrix (n x L); delta: quadrature error tolerance;
    r_bound: upper bound for rank(B), defaults to n.
    """

    A: IMatrix
    B: IMatrix
    a: float
    b: float
    m: int
    L: int
    M: int
    V: np.ndarray
    delta: float = 1e-15
    r_bound: int = None

    def __post_init__(self):
        if self.A.rows != self.A.cols or self.B.shape != self.A.shape:
            raise ConfigError("A and B must be square with equal shape")
        if not self.a < self.b:
            raise ConfigError("need a < b")
        if self.L * self.M != self.m:
            raise ConfigError("need L*M = m")
        if self.delta <= 0:
            raise ConfigError("delta must be positive")
        v = np.asarray(self.V)
        if v.shape != (self.A.rows, self.L):
            raise ConfigError(f"V must be {self.A.rows}x{self.L}")
        if self.r_bound is None:
            object.__setattr__(self, "r_bound", self.A.rows)
        if not self.m <= self.r_bound <= self.A.rows:
            raise ConfigError("need m <= r_bound <= n")

    @property
    def n(self):
        return self.A.rows


@dataclass(frozen=True)
class Contour:
    """Quadrature circle through the interval endpoints with N nodes."""

    gamma: float
    rho: float
    N: int
    theta: tuple
    nodes: tuple


def contour_from_interval(a, b, n_nodes):
    if not a < b:
        raise ConfigError("need a < b")
    if n_nodes < 1:
        raise ConfigError("need at least one node")
    gamma = a + 0.5 * (b - a)
    rho = max(_rops.sub_hi(b, gamma), _rops.sub_hi(gamma, a))
    pi = enclose_pi()
    g = RInterval.point(gamma)
    r = RInterval.point(rho)
    thetas = []
    nodes = []
    for j in range(1, n_nodes + 1):
        th = pi * RInterval.point(float(2 * j - 1)) / RInterval.point(float(n_nodes))
        s, c = enclose_sincos(th)
        thetas.append(th)
        nodes.append(CInterval(g + r * c, r * s))
    return Contour(gamma=gamma, rho=rho, N=n_nodes,
                   theta=tuple(thetas), nodes=tuple(nodes))


@dataclass
class MomentSet:
    """Per-run enclosures produced along the pipeline."""

    Y: list = None
    S_blocks: list = None
    S_full: IMatrix = None
    redM: list = None
    Hlt_in: IMatrix = None
    H_in: IMatrix = None
    trunc_m: list = field(default_factory=list)
    trunc_s: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# probe norm and N selection


def probe_gram_enclosure(spec):
    """Enclosure of V^H B V."""
    vh = np.ascontiguousarray(np.asarray(spec.V, dtype=np.complex128).conj().T)
    p = imat_mul_point_left(vh, spec.B)
    return imat_mul_point_right(p, np.asarray(spec.V, dtype=np.complex128))


def _gap_powers_sup(gap, kmax):
    """Upper bound of max_{k<=kmax} gap^k."""
    top = RInterval.point(gap).pow_int(kmax).sup
    return max(1.0, top)


def compute_c1(spec, gap, fro_sup=None):
    """c1 = ||V^H B V||_F * max_{k<=2M-1} gap^k (rigorous upper bound)."""
    if fro_sup is None:
        fro_sup = fro_norm_sup(probe_gram_enclosure(spec))
    return _rops.mul_hi(fro_sup, _gap_powers_sup(gap, 2 * spec.M - 1))


def compute_c2(spec, gap, beta, fro_sup=None):
    """c2 = (||B^-1||_2 ||V^H B V||_F)^(1/2) * max_{k<=M-1} gap^k."""
    if not beta > 0.0:
        raise PositiveDefiniteRequired(
            "eigenvector constant c2 needs a certified lambda_min(B) > 0")
    if fro_sup is None:
        fro_sup = fro_norm_sup(probe_gram_enclosure(spec))
    inv_b = _rops.div_hi(1.0, beta)
    root = _rops.sqrt_hi(_rops.mul_hi(inv_b, fro_sup))
    return _rops.mul_hi(root, _gap_powers_sup(gap, spec.M - 1))


def select_N(mode, delta, gap, rho, c, deficit, m_blocks=None):
    """Smallest node count driving the truncation bound below delta.

    mode 'eigenvalues' halves the count (the reduced-moment bound decays
    with exponent 2N); 'eigenvectors' and 'hankel_eigenvalues' use the
    un-halved rule.  When m_blocks is given the result is raised to exceed
    2*m_blocks - 1.
    """
    if mode not in ("eigenvalues", "eigenvectors", "hankel_eigenvalues"):
        raise ConfigError(f"unknown mode {mode!r}")
    if delta <= 0:
        raise ConfigError("delta must be positive")
    if not rho < gap:
        raise GapNotCertified(f"rho {rho} must be below the gap bound {gap}")
    x = math.log(delta / (c * deficit + delta)) / math.log(rho / gap)
    if mode == "eigenvalues":
        x *= 0.5
    n = max(1, math.ceil(x))
    if m_blocks is not None:
        n = max(n, 2 * m_blocks)
    return n


# ---------------------------------------------------------------------------
# per-node resolvent solves


_U1 = 2.0 ** -53 * 1.000001


class _TermAccumulator:
    """Compensated summation of floating terms, vectorized over arrays.

    Tracks the exact sum as (high, compensation) via cascaded 2Sum plus an
    absolute-value tally for the second-order error bound; terms whose
    product error was unrepresentable contribute to `extra` directly.
    """

    def __init__(self, shape):
        self.s = np.zeros(shape)
        self.comp = np.zeros(shape)
        self.absum = np.zeros(shape)
        self.extra = np.zeros(shape)
        self.count = 0

    def add(self, t):
        s_new, e = _knp.vtwo_sum(self.s, t)
        self.s = s_new
        self.comp = self.comp + e
        self.absum = self.absum + np.abs(t)
        self.count += 1

    def add_product(self, a, b):
        p, e, bad = _knp.vtwo_prod(a, b)
        if bad.any():
            self.extra = self.extra + np.where(bad, 2.0 * _U1 * np.abs(p) + 1e-315, 0.0)
        self.add(p)
        self.add(e)

    def result(self):
        """(mid, rad) with the exact term sum inside mid +- rad."""
        mid = self.s + self.comp
        k = self.count + 2
        rad = (_U1 * np.abs(mid)
               + 1.2 * (k * k) * (_U1 * _U1) * self.absum
               + self.extra + 1e-300)
        return mid, rad


def _compensated_resid(f_enc, z, b_diag, a_pt, a_bw, x0):
    """Tight enclosure of F - (z B - A) x0 for diagonal B and banded A.

    All products are error-free-transformed and cascaded, so the enclosure
    radius is u-level relative to the residual itself plus the widths of
    the node and right-hand-side intervals (no gamma_n |C||x| term).
    """
    n, ll = x0.shape
    zm = z.mid()
    z_rad = _rops.add_hi(z.re.rad(), z.im.rad())
    xr = np.ascontiguousarray(x0.real)
    xi = np.ascontiguousarray(x0.imag)

    # u = B x0 (exact splitting: diagonal row scaling)
    uh_r, ul_r, bad_r = _knp.vtwo_prod(b_diag[:, None], xr)
    uh_i, ul_i, bad_i = _knp.vtwo_prod(b_diag[:, None], xi)
    u_abs = np.abs(uh_r) + np.abs(uh_i)

    acc_re = _TermAccumulator((n, ll))
    acc_im = _TermAccumulator((n, ll))
    if bad_r.any() or bad_i.any():
        slop = np.where(bad_r | bad_i, 4.0 * _U1 * u_abs + 1e-315, 0.0)
        acc_re.extra += slop
        acc_im.extra += slop

    fm = f_enc.midpoint()
    acc_re.add(np.ascontiguousarray(fm.real))
    acc_im.add(np.ascontiguousarray(fm.imag))

    # -z*(uh + ul): the high part through exact products, the low part as
    # plain terms (their rounding is second order)
    acc_re.add_product(np.full((n, ll), -zm.real), uh_r)
    acc_re.add_product(np.full((n, ll), zm.imag), uh_i)
    acc_im.add_product(np.full((n, ll), -zm.real), uh_i)
    acc_im.add_product(np.full((n, ll), -zm.imag), uh_r)
    lo_re = -zm.real * ul_r + zm.imag * ul_i
    lo_im = -zm.real * ul_i - zm.imag * ul_r
    acc_re.add(lo_re)
    acc_im.add(lo_im)
    acc_re.extra += 4.0 * _U1 * (np.abs(lo_re) + np.abs(lo_im))
    acc_im.extra += 4.0 * _U1 * (np.abs(lo_re) + np.abs(lo_im))

    # + A x0, row-banded: (A x0)[i] = sum_o A[i, i+o] x0[i+o]
    for o in range(-a_bw, a_bw + 1):
        i0 = max(0, -o)
        i1 = min(n, n - o)
        if i0 >= i1:
            continue
        rows = np.arange(i0, i1)
        coefs = np.zeros((n, 1))
        coefs[i0:i1, 0] = a_pt[rows, rows + o].real
        shifted_r = np.zeros((n, ll))
        shifted_i = np.zeros((n, ll))
        shifted_r[i0:i1] = xr[i0 + o:i1 + o]
        shifted_i[i0:i1] = xi[i0 + o:i1 + o]
        acc_re.add_product(coefs * np.ones((1, ll)), shifted_r)
        acc_im.add_product(coefs * np.ones((1, ll)), shifted_i)

    mid_re, rad_re = acc_re.result()
    mid_im, rad_im = acc_im.result()
    # interval widths of the node and of F
    zslack = z_rad * (u_abs + 1e-300)
    f_rad = f_enc.radius()
    rad = np.maximum(rad_re, rad_im) + zslack + f_rad
    mid = mid_re + 1j * mid_im
    return IMatrix.from_midrad(mid, rad)


def _structured_node_solve(z, a_pt, b_pt, b_diag, a_bw, f_enc, f_mid,
                           norm_a_inf, norm_b_inf, blas_switch=True):
    """Krawczyk enclosure of (z B - A)^-1 B V for point A, B.

    The candidate solution comes from a backward-stable LU solve with one
    refinement step against a compensated residual, so the enclosure radius
    sits near u-level instead of carrying the node's condition number.
    """
    import scipy.linalg.lapack as _lapack

    n = a_pt.shape[0]
    zmid = z.mid()
    if b_diag is not None:
        c_mid = -np.asarray(a_pt, dtype=np.complex128)
        c_mid[np.arange(n), np.arange(n)] += zmid * b_diag
    else:
        c_mid = zmid * b_pt - a_pt
    with _bk.blas_threads(_bk.BLAS_MAX if blas_switch else 1):
        lu, piv, info = _lapack.zgetrf(c_mid)
        if info != 0:
            return LinearEnclosure(f_enc, False, np.inf)
        x0, info = _lapack.zgetrs(lu, piv, np.asarray(f_mid, dtype=np.complex128))
        if info != 0:
            return LinearEnclosure(f_enc, False, np.inf)
        r, info = _lapack.zgetri(lu, piv)
        if info != 0:
            return LinearEnclosure(f_enc, False, np.inf)
    r = np.ascontiguousarray(r)

    tight = (b_diag is not None and a_bw is not None
             and bool((np.asarray(a_pt).imag == 0.0).all()))

    def residual(cand):
        if tight:
            return _compensated_resid(f_enc, z, b_diag, np.asarray(a_pt), a_bw, cand)
        if b_diag is not None:
            bx = rowscale_enclosure(b_diag, cand)
        else:
            bx = gemm_enclosure(b_pt, cand)
        ax = gemm_enclosure(a_pt, cand)
        return f_enc - (_cscale_blas(z, bx) - ax)

    # one refinement step sharpens the candidate so the residual enclosure
    # (and with it the final radius) sits near u-level
    r1 = residual(x0)
    dx, info = _lapack.zgetrs(lu, piv, np.ascontiguousarray(r1.midpoint()))
    if info == 0:
        x0 = x0 + dx
    resid = residual(x0)
    abs_r = _cabs_ub(r)
    e0 = _e0_enclosure(r, abs_r, resid)
    if b_diag is not None and a_bw is not None:
        alpha = _banded_alpha(z, r, abs_r, a_pt, b_diag, a_bw,
                              norm_a_inf, norm_b_inf)
    else:
        alpha = _structured_alpha(z, r, abs_r, c_mid, norm_a_inf, norm_b_inf,
                                  b_diag)
    return _finish_krawczyk_alpha(x0, e0, alpha)


def _banded_alpha(z, r, abs_r, a_pt, b_diag, a_bw, norm_a_inf, norm_b_inf):
    """||I - R(zB - A)||_inf for diagonal B and banded A, gemm-free."""
    n = r.shape[0]
    zm = z.mid()
    z_rad = _rops.add_hi(z.re.rad(), z.im.rad())
    zm_abs = abs(zm.real) + abs(zm.imag)
    p = r * (zm * b_diag)[None, :]
    for o in range(-a_bw, a_bw + 1):
        j0 = max(0, -o)
        j1 = min(n, n - o)
        if j0 >= j1:
            continue
        js = np.arange(j0, j1)
        diag = np.ascontiguousarray(a_pt[js + o, js])
        p[:, j0:j1] -= r[:, j0 + o:j1 + o] * diag[None, :]
    idx = np.arange(n)
    p[idx, idx] -= 1.0
    grow = float(_cabs_ub(p).sum(axis=1).max())
    norm_r = float(abs_r.sum(axis=1).max()) * (1.0 + 3.0 * (n + 2) * _U1)
    g = _gamma_up_local(2 * (2 * a_bw + 1) + 6)
    fl_err = 1.5 * g * norm_r * (zm_abs * norm_b_inf + norm_a_inf)
    return (grow * (1.0 + 3.0 * (n + 2) * _U1) + fl_err
            + z_rad * norm_r * norm_b_inf + (n + 8) * 1e-315 + 1e-300)


def _cabs_ub(x):
    """Entrywise upper bound on |x| as |re| + |im| (cheap, always >=)."""
    x = np.asarray(x)
    if np.iscomplexobj(x):
        return np.abs(x.real) + np.abs(x.imag)
    return np.abs(x)


def _e0_enclosure(r, abs_r, resid):
    """Enclosure of r @ resid for point r and thin interval resid."""
    k = r.shape[1]
    mid = resid.midpoint()
    prod = r @ mid
    g = _gamma_up_local(k + 4)
    absload = resid.radius() + 1.5 * g * _cabs_ub(mid)
    rad = (abs_r @ absload) * (1.0 + (k + 4) * 3.0 * _U1) \
        + 1.5 * g * _cabs_ub(prod) + (k + 4) * 1e-315 + 1e-300
    return IMatrix.from_midrad(prod, rad)


def _structured_alpha(z, r, abs_r, c_tilde, norm_a_inf, norm_b_inf, b_diag):
    """Upper bound on ||I - R (z B - A)||_inf.

    Splits off the factorized point matrix c_tilde:
    ||I - R C(z)|| <= ||I - R c_tilde|| + ||R|| (||c_tilde - C(zm)|| +
    |z - zm| ||B||), where the first term costs one gemm and the rest are
    norm inequalities.
    """
    n = r.shape[0]
    zm = z.mid()
    z_rad = _rops.add_hi(z.re.rad(), z.im.rad())
    zm_abs = abs(zm.real) + abs(zm.imag)

    g0 = r @ c_tilde
    idx = np.arange(n)
    g0[idx, idx] -= 1.0
    grow = float(_cabs_ub(g0).sum(axis=1).max())
    norm_r = float(abs_r.sum(axis=1).max()) * (1.0 + 3.0 * (n + 2) * _U1)
    norm_c = norm_a_inf + zm_abs * norm_b_inf * (1.0 + 4.0 * _U1)

    base = grow * (1.0 + 3.0 * (n + 2) * _U1)
    gemm_err = 1.5 * _gamma_up_local(n + 4) * norm_r * norm_c
    if b_diag is not None:
        ct_diag = _cabs_ub(c_tilde[idx, idx])
        d_term = float(np.max(_U1 * (zm_abs * np.abs(b_diag) * 2.0 + ct_diag)))
    else:
        d_term = _U1 * (2.0 * zm_abs * norm_b_inf + norm_c)
    return (base + gemm_err + norm_r * (d_term + z_rad * norm_b_inf)
            + (n + 8) * 1e-315 + 1e-300)


def _gamma_up_local(k):
    g = (k * 2.0 ** -53) / (1.0 - k * 2.0 ** -53)
    return g * (1.0 + 4.0 * 2.0 ** -53)


def _gemm_rad(abs_p, abs_q, k):
    e = abs_p @ abs_q
    g = _gamma_up_local(k + 4)
    return 1.5 * g * e + (k + 4) * 1e-315


def _finish_krawczyk_alpha(x0, e0, alpha):
    """finish_krawczyk with a precomputed contraction bound."""
    if not alpha < 1.0:
        return LinearEnclosure(e0, False, alpha)
    e0mag = e0.mag_sup()
    col_sup = e0mag.max(axis=0)
    denom = _rops.add_lo(1.0, -alpha)
    tail = np.array([_rops.mul_hi(alpha, _rops.div_hi(s, denom)) for s in col_sup])
    x = IMatrix.from_point(x0) + e0.widen(tail[None, :])
    return LinearEnclosure(x, True, alpha)


def _cscale_blas(z, m):
    """Midpoint-radius product of a thin complex interval scalar with an
    interval matrix, using vectorized numpy with rigorous inflation."""
    zm = z.mid()
    zr = _rops.add_hi(z.re.rad(), z.im.rad())
    mm = m.midpoint()
    mr = m.radius()
    prod = zm * mm
    amm = np.abs(mm)
    rad = (np.abs(prod) * 16.0 * _U
           + abs(zm) * mr * (1.0 + 16.0 * _U)
           + zr * (amm + mr) * (1.0 + 16.0 * _U)
           + 1e-300)
    return IMatrix.from_midrad(prod, rad)




def solve_at_nodes(spec, contour, threads=None):
    """Enclosures [Y_j] of (z_j B - A) Y_j = B V at every node.

    For real-symmetric problems, conjugate node pairs are solved once and
    mirrored (conj(Y) solves the system at conj(z)).  Raises
    NodeSolveFailed on the first node whose enclosure does not certify.
    """
    n = spec.n
    v = np.asarray(spec.V, dtype=np.complex128)
    f_enc = imat_mul_point_right(spec.B, v)
    f_mid = f_enc.midpoint()

    point_pencil = spec.A.is_point() and spec.B.is_point()
    a_pt = b_pt = b_diag = a_bw = None
    norm_a_inf = norm_b_inf = 0.0
    if point_pencil:
        a_pt = spec.A.midpoint()
        b_pt = spec.B.midpoint()
        if point_bandwidth(b_pt) == 0 and (b_pt.imag == 0.0).all():
            b_diag = np.ascontiguousarray(b_pt.diagonal().real)
        bw = point_bandwidth(a_pt)
        if bw <= max(8, n // 16):
            a_bw = bw
        slack = 1.0 + 3.0 * (n + 2) * _U1
        norm_a_inf = float(_cabs_ub(a_pt).sum(axis=1).max()) * slack
        norm_b_inf = float(_cabs_ub(b_pt).sum(axis=1).max()) * slack

    mirror = (spec.A.is_real() and spec.B.is_real()
              and not np.iscomplexobj(np.asarray(spec.V)))
    n_nodes = contour.N
    if mirror:
        solve_idx = list(range((n_nodes + 1) // 2))
    else:
        solve_idx = list(range(n_nodes))

    if threads is None:
        threads = _bk.thread_cap()
    parallel = threads > 1 and len(solve_idx) > 1

    def run(j):
        z = contour.nodes[j]
        if point_pencil:
            return _structured_node_solve(z, a_pt, b_pt, b_diag, a_bw,
                                          f_enc, f_mid, norm_a_inf, norm_b_inf,
                                          blas_switch=not parallel)
        c = spec.B.scale(z) - spec.A
        return krawczyk_solve(c, f_enc)

    with _bk.blas_threads(1):
        if parallel:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                solved = list(pool.map(run, solve_idx))
        else:
            solved = [run(j) for j in solve_idx]

    out = [None] * n_nodes
    for j, enc in zip(solve_idx, solved):
        out[j] = enc
        if mirror:
            out[n_nodes - 1 - j] = enc.conj()
    for j, enc in enumerate(out):
        if not enc.converged:
            raise NodeSolveFailed(j, f"node {j} contraction factor {enc.contraction_factor}")
    return out


# ---------------------------------------------------------------------------
# moment assembly


def _node_weights(contour, kcount):
    """Weights rho^(k+1) exp(i(k+1)theta_j)/N as a (kcount, N, 4) array."""
    r = RInterval.point(contour.rho)
    nn = RInterval.point(float(contour.N))
    w = np.empty((kcount, contour.N, 4))
    for k in range(kcount):
        scale = r.pow_int(k + 1) / nn
        kk = RInterval.point(float(k + 1))
        for j in range(contour.N):
            s, c = enclose_sincos(contour.theta[j] * kk)
            wre = c * scale
            wim = s * scale
            w[k, j, 0] = wre.inf
            w[k, j, 1] = wre.sup
            w[k, j, 2] = wim.inf
            w[k, j, 3] = wim.sup
    return w


def assemble_S(yset, contour, m_blocks):
    """Transformation blocks S_k^(N), k = 0..M-1, and their concatenation."""
    if len(yset) != contour.N:
        raise DimensionMismatch("need one solve per node")
    ystack = np.stack([enc.X.data for enc in yset])
    w = _node_weights(contour, m_blocks)
    out = _bk.k_wsum(ystack, w)
    blocks = [IMatrix(out[k]) for k in range(m_blocks)]
    full = blocks[0].hstack(*blocks[1:]) if m_blocks > 1 else blocks[0]
    return blocks, full


def assemble_reduced_moments(yset, contour, spec):
    """Reduced moments M_k^(N) = V^H B M_k^(N) B V for k = 0..2M-1."""
    if len(yset) != contour.N:
        raise DimensionMismatch("need one solve per node")
    vh = np.ascontiguousarray(np.asarray(spec.V, dtype=np.complex128).conj().T)
    p = imat_mul_point_left(vh, spec.B)
    py = np.stack([imat_mul(p, enc.X).data for enc in yset])
    w = _node_weights(contour, 2 * spec.M)
    out = _bk.k_wsum(py, w)
    return [IMatrix(out[k]) for k in range(2 * spec.M)]


def rr_pencil(s_full, spec, gamma):
    """Projected pencil (S^H (A - gamma B) S, S^H B S), Hermitian-tightened."""
    if s_full.rows != spec.n:
        raise DimensionMismatch("S row count mismatch")
    w = spec.A - spec.B.scale(CInterval.point(gamma))
    ws = imat_mul(w, s_full)
    hlt = imat_mul(s_full.conj_t(), ws).hermitianize()
    bs = imat_mul(spec.B, s_full)
    h = imat_mul(s_full.conj_t(), bs).hermitianize()
    return hlt, h


def hankel_from_moments(red_m, m_blocks):
    """Block Hankel pencil from reduced moments M_1..M_{2M-1} / M_0..M_{2M-2}."""
    if len(red_m) != 2 * m_blocks:
        raise DimensionMismatch("need 2M reduced moments")
    ll = red_m[0].rows
    dim = ll * m_blocks
    hlt = np.empty((dim, dim, 4))
    h = np.empty((dim, dim, 4))
    for bi in range(m_blocks):
        for bj in range(m_blocks):
            hlt[bi * ll:(bi + 1) * ll, bj * ll:(bj + 1) * ll] = red_m[bi + bj + 1].data
            h[bi * ll:(bi + 1) * ll, bj * ll:(bj + 1) * ll] = red_m[bi + bj].data
    return IMatrix(hlt).hermitianize(), IMatrix(h).hermitianize()


# ---------------------------------------------------------------------------
# truncation bounds (Hermitian PSD B; nearest outside eigenvalue at distance
# >= gap from gamma; 2M-1 < N)


def _q_power_factor(rho, gap, exponent):
    q = _rops.div_hi(rho, gap)
    if not q < 1.0:
        raise GapNotCertified(f"rho/gap = {q} not below 1")
    x = RInterval.point(q).pow_int(exponent).sup
    if not x < 1.0:
        raise GapNotCertified("quadrature decay factor not below 1")
    return _rops.div_hi(x, _rops.add_lo(1.0, -x))


def truncation_bound_moment(k, contour, gap, spec, fro_sup=None,
                            double_exponent=True):
    """Upper bound on |M_k,out^(N)| entrywise:
    (r-m) gap^k q^(2N)/(1-q^(2N)) ||V^H B V||_F with q = rho/gap.

    double_exponent=False evaluates the single-power variant (exponent N)
    used by the block-Hankel route, whose moments carry one filter factor.
    """
    if not 2 * spec.M - 1 < contour.N:
        raise ConfigError("need 2M-1 < N")
    if fro_sup is None:
        fro_sup = fro_norm_sup(probe_gram_enclosure(spec))
    exponent = 2 * contour.N if double_exponent else contour.N
    t = _q_power_factor(contour.rho, gap, exponent)
    gp = RInterval.point(gap).pow_int(k).sup
    out = _rops.mul_hi(float(spec.r_bound - spec.m), gp)
    out = _rops.mul_hi(out, t)
    return _rops.mul_hi(out, fro_sup)


def truncation_bound_S(k, contour, gap, spec, beta, fro_sup=None):
    """Upper bound on |S_k,out^(N)| entrywise:
    (n-m) gap^k q^N/(1-q^N) (beta^-1 ||V^H B V||_F)^(1/2)."""
    if not 2 * spec.M - 1 < contour.N:
        raise ConfigError("need 2M-1 < N")
    if not beta > 0.0:
        raise PositiveDefiniteRequired(
            "eigenvector truncation bound needs lambda_min(B) > 0")
    if fro_sup is None:
        fro_sup = fro_norm_sup(probe_gram_enclosure(spec))
    t = _q_power_factor(contour.rho, gap, contour.N)
    gp = RInterval.point(gap).pow_int(k).sup
    root = _rops.sqrt_hi(_rops.mul_hi(_rops.div_hi(1.0, beta), fro_sup))
    out = _rops.mul_hi(float(spec.n - spec.m), gp)
    out = _rops.mul_hi(out, t)
    return _rops.mul_hi(out, root)


def enclose_in_parts(raw, trunc):
    """Inflate a raw enclosure by the truncation bound: the result contains
    raw + {|w| <= trunc} entrywise, hence the in-part it targets."""
    t = np.asarray(trunc, dtype=np.float64)
    if (t < 0).any():
        raise ConfigError("truncation bound must be nonnegative")
    return raw.widen(t)


# ---------------------------------------------------------------------------
# filter-factor oracle (plain floating arithmetic, test support)


def d_factor_oracle(lam, gamma, rho, n_nodes, inside, offset_nodes=False):
    """Filter value applied by the N-point rule to one eigencomponent.

    Default formulas follow the standard statement for nodes at angles
    2*pi*j/N; offset_nodes=True gives the exact filter for the half-offset
    node family theta_j = (2j-1)pi/N used by this package's contours (the
    two agree up to O(q^N) and share the truncation bounds for even N).
    """
    dist = abs(lam - gamma)
    if dist == rho:
        raise OnContour(f"eigenvalue at distance {dist} equals rho")
    if inside:
        w = (lam - gamma) / rho
        wn = w ** n_nodes
        return 1.0 / (1.0 + wn) if offset_nodes else 1.0 / (1.0 - wn)
    v = rho / (lam - gamma)
    vn = v ** n_nodes
    if offset_nodes:
        return vn / (1.0 + vn)
    return -vn / (1.0 - vn)
