"""Inf-sup interval arithmetic over reals, complex rectangles, and matrices.

Outward rounding comes from next-float adjustment of round-to-nearest
results, applied only when an error-free transformation proves the
operation inexact.  No hardware rounding modes are touched, so every
operation is thread-safe and deterministic.

Matrix intervals are dense float64 arrays of shape (rows, cols, 4) with
planes (re_inf, re_sup, im_inf, im_sup).
"""

from __future__ import annotations

import math

import numpy as np

from . import _rops
from . import _kernels_numpy as _knp
from . import backend as _bk
from .errors import DimensionMismatch, DivByZeroInterval

_U = 2.0 ** -53
_INF = math.inf


class RInterval:
    """Closed real interval [inf, sup]; NaN endpoints are rejected."""

    __slots__ = ("inf", "sup")

    def __init__(self, inf, sup=None):
        if sup is None:
            sup = inf
        inf = float(inf)
        sup = float(sup)
        if math.isnan(inf) or math.isnan(sup) or inf > sup:
            raise ValueError(f"invalid interval endpoints [{inf}, {sup}]")
        object.__setattr__(self, "inf", inf)
        object.__setattr__(self, "sup", sup)

    def __setattr__(self, *a):
        raise AttributeError("RInterval is immutable")

    @staticmethod
    def point(x):
        return RInterval(float(x), float(x))

    @staticmethod
    def from_int(n):
        """Enclosure of an arbitrary Python integer."""
        f = float(n)
        if int(f) == n:
            return RInterval(f, f)
        lo, hi = f, f
        if f > n:
            lo = math.nextafter(f, -_INF)
        else:
            hi = math.nextafter(f, _INF)
        return RInterval(lo, hi)

    def __repr__(self):
        return f"RInterval({self.inf!r}, {self.sup!r})"

    def __eq__(self, other):
        return (isinstance(other, RInterval)
                and self.inf == other.inf and self.sup == other.sup)

    def __hash__(self):
        return hash((self.inf, self.sup))

    def __add__(self, other):
        o = _as_rint(other)
        return RInterval(*_rops.iadd(self.inf, self.sup, o.inf, o.sup))

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_rint(other)
        return RInterval(*_rops.isub(self.inf, self.sup, o.inf, o.sup))

    def __rsub__(self, other):
        return _as_rint(other) - self

    def __mul__(self, other):
        o = _as_rint(other)
        return RInterval(*_rops.imul(self.inf, self.sup, o.inf, o.sup))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_rint(other)
        if o.inf <= 0.0 <= o.sup:
            raise DivByZeroInterval(f"division by {o!r}")
        return RInterval(*_rops.idiv(self.inf, self.sup, o.inf, o.sup))

    def __rtruediv__(self, other):
        return _as_rint(other) / self

    def __neg__(self):
        return RInterval(-self.sup, -self.inf)

    def __abs__(self):
        if self.inf >= 0.0:
            return self
        if self.sup <= 0.0:
            return -self
        return RInterval(0.0, max(-self.inf, self.sup))

    def square(self):
        if self.inf <= 0.0 <= self.sup:
            m = max(-self.inf, self.sup)
            return RInterval(0.0, _rops.mul_hi(m, m))
        return self * self

    def sqrt(self):
        if self.inf < 0.0:
            raise ValueError("sqrt of an interval with negative points")
        return RInterval(*_rops.isqrt(self.inf, self.sup))

    def pow_int(self, k):
        """self**k for k >= 0 by binary exponentiation."""
        if k < 0:
            raise ValueError("negative exponent")
        result = RInterval(1.0, 1.0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base.square()
            k >>= 1
        return result

    def mid(self):
        m = self.inf + 0.5 * (self.sup - self.inf)
        return min(max(m, self.inf), self.sup)

    def rad(self):
        """Upper bound on the radius around mid()."""
        m = self.mid()
        return max(_rops.sub_hi(self.sup, m), _rops.sub_hi(m, self.inf))

    def width(self):
        return _rops.sub_hi(self.sup, self.inf)

    def contains(self, x):
        return self.inf <= x <= self.sup

    def contains_interval(self, other):
        return self.inf <= other.inf and other.sup <= self.sup

    def intersect(self, other):
        lo = max(self.inf, other.inf)
        hi = min(self.sup, other.sup)
        if lo > hi:
            raise ValueError("empty intersection")
        return RInterval(lo, hi)

    def hull(self, other):
        return RInterval(min(self.inf, other.inf), max(self.sup, other.sup))

    def widened(self, t):
        return RInterval(_rops.add_lo(self.inf, -t), _rops.add_hi(self.sup, t))

    def mag(self):
        """sup |x| over the interval."""
        return max(abs(self.inf), abs(self.sup))

    def mig(self):
        """inf |x| over the interval."""
        if self.inf <= 0.0 <= self.sup:
            return 0.0
        return min(abs(self.inf), abs(self.sup))


def _as_rint(x):
    if isinstance(x, RInterval):
        return x
    return RInterval.point(x)


class CInterval:
    """Rectangular complex interval re + i*im."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=None):
        if im is None:
            im = RInterval(0.0, 0.0)
        object.__setattr__(self, "re", _as_rint(re))
        object.__setattr__(self, "im", _as_rint(im))

    def __setattr__(self, *a):
        raise AttributeError("CInterval is immutable")

    @staticmethod
    def point(z):
        z = complex(z)
        return CInterval(RInterval.point(z.real), RInterval.point(z.imag))

    def __repr__(self):
        return f"CInterval({self.re!r}, {self.im!r})"

    def __add__(self, other):
        o = _as_cint(other)
        return CInterval(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_cint(other)
        return CInterval(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return _as_cint(other) - self

    def __mul__(self, other):
        o = _as_cint(other)
        rl, rh, il, ih = _rops.cmul(self.re.inf, self.re.sup, self.im.inf, self.im.sup,
                                    o.re.inf, o.re.sup, o.im.inf, o.im.sup)
        return CInterval(RInterval(rl, rh), RInterval(il, ih))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_cint(other)
        den = o.re.square() + o.im.square()
        if den.inf <= 0.0:
            raise DivByZeroInterval("complex division by interval containing 0")
        num = self * o.conj()
        return CInterval(num.re / den, num.im / den)

    def __neg__(self):
        return CInterval(-self.re, -self.im)

    def conj(self):
        return CInterval(self.re, -self.im)

    def mid(self):
        return complex(self.re.mid(), self.im.mid())

    def mag_sup(self):
        return _rops.mag_hi(self.re.inf, self.re.sup, self.im.inf, self.im.sup)

    def contains(self, z):
        z = complex(z)
        return self.re.contains(z.real) and self.im.contains(z.imag)

    def contains_cinterval(self, other):
        return (self.re.contains_interval(other.re)
                and self.im.contains_interval(other.im))

    def widened(self, t):
        return CInterval(self.re.widened(t), self.im.widened(t))


def _as_cint(x):
    if isinstance(x, CInterval):
        return x
    if isinstance(x, RInterval):
        return CInterval(x)
    return CInterval.point(x)


# ---------------------------------------------------------------------------
# scalar operation aliases

def r_add(a, b):
    return _as_rint(a) + _as_rint(b)


def r_sub(a, b):
    return _as_rint(a) - _as_rint(b)


def r_mul(a, b):
    return _as_rint(a) * _as_rint(b)


def r_div(a, b):
    return _as_rint(a) / _as_rint(b)


def c_mul(a, b):
    return _as_cint(a) * _as_cint(b)


def c_div(a, b):
    return _as_cint(a) / _as_cint(b)


def magnitude_sup(z):
    return _as_cint(z).mag_sup()


# ---------------------------------------------------------------------------
# pi / sin / cos enclosures

# math.pi rounds pi downward; one step up brackets it.
_PI = RInterval(math.pi, math.nextafter(math.pi, _INF))
_HALF_PI = RInterval(math.pi / 2.0, math.nextafter(math.pi / 2.0, _INF))


def enclose_pi():
    return _PI


def _factorial_interval(n):
    f = 1
    for k in range(2, n + 1):
        f *= k
    return RInterval.from_int(f)


def _inv_factorials(indices):
    one = RInterval(1.0, 1.0)
    return [one / _factorial_interval(n) for n in indices]

_SIN_COEF = _inv_factorials(range(1, 19, 2))   # 1/1!, 1/3!, ..., 1/17!
_COS_COEF = _inv_factorials(range(0, 19, 2))   # 1/0!, 1/2!, ..., 1/18!
_INV_19FACT = _inv_factorials([19])[0]
_INV_20FACT = _inv_factorials([20])[0]
_FULL = RInterval(-1.0, 1.0)


def _sincos_reduced(r):
    """Taylor enclosures of sin/cos for |r| <= 0.9."""
    u = r.square()
    s = RInterval(0.0, 0.0)
    for j in range(len(_SIN_COEF) - 1, -1, -1):
        c = _SIN_COEF[j] if j % 2 == 0 else -_SIN_COEF[j]
        s = s * u + c
    s = s * r
    c_acc = RInterval(0.0, 0.0)
    for j in range(len(_COS_COEF) - 1, -1, -1):
        c = _COS_COEF[j] if j % 2 == 0 else -_COS_COEF[j]
        c_acc = c_acc * u + c
    rmax = r.mag()
    rm = RInterval.point(rmax)
    rem_s = (rm.pow_int(19) * _INV_19FACT).sup
    rem_c = (rm.pow_int(20) * _INV_20FACT).sup
    sin_enc = s.widened(rem_s).intersect(_FULL)
    cos_enc = c_acc.widened(rem_c).intersect(_FULL)
    return sin_enc, cos_enc


def enclose_sincos(theta):
    """Rigorous (sin, cos) enclosures for every point of theta."""
    theta = _as_rint(theta)
    if not (math.isfinite(theta.inf) and math.isfinite(theta.sup)):
        raise ValueError("sincos argument must be finite")
    if theta.width() > 3.0:
        return _FULL, _FULL
    k = int(round(theta.mid() / (math.pi / 2.0)))
    r = theta - _HALF_PI * RInterval.point(float(k))
    if r.mag() > 0.9:
        # mid() landed near a quadrant boundary; shift one quadrant
        k += 1 if r.mid() > 0 else -1
        r = theta - _HALF_PI * RInterval.point(float(k))
        if r.mag() > 0.9:
            return _FULL, _FULL
    s, c = _sincos_reduced(r)
    m = k % 4
    if m == 0:
        return s, c
    if m == 1:
        return c, -s
    if m == 2:
        return -s, -c
    return -c, s


# ---------------------------------------------------------------------------
# interval matrices

_TAGS = ("real-symmetric", "hermitian", "general")


class IMatrix:
    """Dense complex interval matrix stored as (rows, cols, 4) planes."""

    __slots__ = ("data", "tag", "_mid", "_rad")

    def __init__(self, data, tag="general"):
        data = np.ascontiguousarray(data, dtype=np.float64)
        if data.ndim != 3 or data.shape[2] != 4:
            raise ValueError("IMatrix data must have shape (rows, cols, 4)")
        if tag not in _TAGS:
            raise ValueError(f"unknown tag {tag!r}")
        if np.isnan(data).any():
            raise ValueError("NaN entries are forbidden")
        if (data[..., 0] > data[..., 1]).any() or (data[..., 2] > data[..., 3]).any():
            raise ValueError("inverted interval endpoints")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "_mid", None)
        object.__setattr__(self, "_rad", None)

    def __setattr__(self, *a):
        raise AttributeError("IMatrix is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_point(arr, tag="general"):
        arr = np.asarray(arr)
        r, c = arr.shape
        data = np.zeros((r, c, 4))
        if np.iscomplexobj(arr):
            data[..., 0] = data[..., 1] = arr.real
            data[..., 2] = data[..., 3] = arr.imag
        else:
            data[..., 0] = data[..., 1] = arr
        return IMatrix(data, tag)

    @staticmethod
    def zeros(r, c, tag="general"):
        return IMatrix(np.zeros((r, c, 4)), tag)

    @staticmethod
    def eye(n, tag="hermitian"):
        data = np.zeros((n, n, 4))
        idx = np.arange(n)
        data[idx, idx, 0] = 1.0
        data[idx, idx, 1] = 1.0
        return IMatrix(data, tag)

    @staticmethod
    def from_planes(re_inf, re_sup, im_inf=None, im_sup=None, tag="general"):
        re_inf = np.asarray(re_inf, dtype=np.float64)
        data = np.zeros(re_inf.shape + (4,))
        data[..., 0] = re_inf
        data[..., 1] = re_sup
        if im_inf is not None:
            data[..., 2] = im_inf
            data[..., 3] = im_sup
        return IMatrix(data, tag)

    @staticmethod
    def from_midrad(mid, rad, tag="general"):
        """Rectangle cover of the disc matrix <mid, rad>."""
        mid = np.asarray(mid, dtype=np.complex128)
        rad = np.broadcast_to(np.asarray(rad, dtype=np.float64), mid.shape)
        if (rad < 0).any():
            raise ValueError("negative radius")
        data = np.zeros(mid.shape + (4,))
        data[..., 0] = _knp.vadd_lo(mid.real, -rad)
        data[..., 1] = _knp.vadd_hi(mid.real, rad)
        data[..., 2] = _knp.vadd_lo(mid.imag, -rad)
        data[..., 3] = _knp.vadd_hi(mid.imag, rad)
        return IMatrix(data, tag)

    # -- basic queries ------------------------------------------------------

    @property
    def rows(self):
        return self.data.shape[0]

    @property
    def cols(self):
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape[:2]

    def __repr__(self):
        return f"IMatrix({self.rows}x{self.cols}, tag={self.tag!r})"

    def entry(self, i, j):
        d = self.data[i, j]
        return CInterval(RInterval(d[0], d[1]), RInterval(d[2], d[3]))

    def is_point(self):
        return (self.data[..., 0] == self.data[..., 1]).all() and \
               (self.data[..., 2] == self.data[..., 3]).all()

    def is_real(self):
        return (self.data[..., 2] == 0.0).all() and (self.data[..., 3] == 0.0).all()

    def midpoint(self):
        if self._mid is not None:
            return self._mid
        re = self.data[..., 0] + 0.5 * (self.data[..., 1] - self.data[..., 0])
        re = np.clip(re, self.data[..., 0], self.data[..., 1])
        im = self.data[..., 2] + 0.5 * (self.data[..., 3] - self.data[..., 2])
        im = np.clip(im, self.data[..., 2], self.data[..., 3])
        out = re + 1j * im
        out.flags.writeable = False
        object.__setattr__(self, "_mid", out)
        return out

    def radius(self):
        """Entrywise upper bound on |Z - midpoint| over the matrix."""
        if self._rad is not None:
            return self._rad
        m = self.midpoint()
        rr = np.maximum(_knp.vadd_hi(self.data[..., 1], -m.real),
                        _knp.vadd_hi(m.real, -self.data[..., 0]))
        ri = np.maximum(_knp.vadd_hi(self.data[..., 3], -m.imag),
                        _knp.vadd_hi(m.imag, -self.data[..., 2]))
        s = _knp.vadd_hi(_knp.vmul_hi(rr, rr), _knp.vmul_hi(ri, ri))
        out = np.where(s > 0.0, np.nextafter(np.sqrt(s), _INF), 0.0)
        out.flags.writeable = False
        object.__setattr__(self, "_rad", out)
        return out

    def mag_sup(self):
        return _bk.k_mag_sup(self.data)

    # -- algebra ------------------------------------------------------------

    def __add__(self, other):
        _check_same_shape(self, other)
        return IMatrix(_bk.k_add(self.data, other.data))

    def __sub__(self, other):
        _check_same_shape(self, other)
        return IMatrix(_bk.k_sub(self.data, other.data))

    def __matmul__(self, other):
        return imat_mul(self, other)

    def __neg__(self):
        d = np.empty_like(self.data)
        d[..., 0] = -self.data[..., 1]
        d[..., 1] = -self.data[..., 0]
        d[..., 2] = -self.data[..., 3]
        d[..., 3] = -self.data[..., 2]
        return IMatrix(d)

    def scale(self, z):
        z = _as_cint(z)
        return IMatrix(_bk.k_cscale(z.re.inf, z.re.sup, z.im.inf, z.im.sup, self.data))

    def conj_t(self):
        d = np.empty((self.cols, self.rows, 4))
        d[..., 0] = self.data[..., 0].T
        d[..., 1] = self.data[..., 1].T
        d[..., 2] = -self.data[..., 3].T
        d[..., 3] = -self.data[..., 2].T
        return IMatrix(d, self.tag)

    def widen(self, t):
        """Entrywise inflation by t (scalar or (rows, cols) array), t >= 0."""
        t = np.broadcast_to(np.asarray(t, dtype=np.float64), self.shape)
        if (t < 0).any():
            raise ValueError("negative inflation")
        d = np.empty_like(self.data)
        d[..., 0] = _knp.vadd_lo(self.data[..., 0], -t)
        d[..., 1] = _knp.vadd_hi(self.data[..., 1], t)
        d[..., 2] = _knp.vadd_lo(self.data[..., 2], -t)
        d[..., 3] = _knp.vadd_hi(self.data[..., 3], t)
        return IMatrix(d, self.tag)

    def hermitianize(self):
        """Intersect with the conjugate transpose (tightens Hermitian enclosures)."""
        ct = self.conj_t()
        d = np.empty_like(self.data)
        d[..., 0] = np.maximum(self.data[..., 0], ct.data[..., 0])
        d[..., 1] = np.minimum(self.data[..., 1], ct.data[..., 1])
        d[..., 2] = np.maximum(self.data[..., 2], ct.data[..., 2])
        d[..., 3] = np.minimum(self.data[..., 3], ct.data[..., 3])
        if (d[..., 0] > d[..., 1]).any() or (d[..., 2] > d[..., 3]).any():
            raise ValueError("hermitianize produced an empty intersection")
        return IMatrix(d, "hermitian" if self.tag == "general" else self.tag)

    def contains_point_matrix(self, arr, slack=0.0):
        arr = np.asarray(arr, dtype=np.complex128)
        return bool(
            (self.data[..., 0] - slack <= arr.real).all()
            and (arr.real <= self.data[..., 1] + slack).all()
            and (self.data[..., 2] - slack <= arr.imag).all()
            and (arr.imag <= self.data[..., 3] + slack).all())

    def contains_matrix(self, other):
        return bool(
            (self.data[..., 0] <= other.data[..., 0]).all()
            and (other.data[..., 1] <= self.data[..., 1]).all()
            and (self.data[..., 2] <= other.data[..., 2]).all()
            and (other.data[..., 3] <= self.data[..., 3]).all())

    def hstack(self, *others):
        return IMatrix(np.concatenate([self.data] + [o.data for o in others], axis=1))

    def block(self, r0, r1, c0, c1):
        return IMatrix(self.data[r0:r1, c0:c1].copy())


def _check_same_shape(a, b):
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch {a.shape} vs {b.shape}")


def imat_mul(a, b):
    """Interval matrix product with entrywise containment."""
    if a.cols != b.rows:
        raise DimensionMismatch(f"inner dimensions {a.cols} vs {b.rows}")
    return IMatrix(_bk.k_mm(a.data, b.data))


def imat_mul_point_left(p, b):
    """p (point complex ndarray) @ b (IMatrix)."""
    p = np.asarray(p, dtype=np.complex128)
    if p.shape[1] != b.rows:
        raise DimensionMismatch(f"inner dimensions {p.shape[1]} vs {b.rows}")
    return IMatrix(_bk.k_mm_point_left(
        np.ascontiguousarray(p.real), np.ascontiguousarray(p.imag), b.data))


def imat_mul_point_right(a, q):
    q = np.asarray(q, dtype=np.complex128)
    if a.cols != q.shape[0]:
        raise DimensionMismatch(f"inner dimensions {a.cols} vs {q.shape[0]}")
    return IMatrix(_bk.k_mm_point_right(
        a.data, np.ascontiguousarray(q.real), np.ascontiguousarray(q.imag)))


def fro_norm_sup(m):
    """Rigorous upper bound on the Frobenius norm over the interval matrix."""
    mags = m.mag_sup()
    sq = _knp.vmul_hi(mags, mags)
    total = float(np.sum(sq))
    count = sq.size + 1
    total = total * (1.0 + count * 3.0 * _U) + 1e-300
    return _rops.sqrt_hi(total)


def two_norm_sup(m):
    """Upper bound on the spectral norm via ||M||_2 <= ||M||_F (documented
    over-estimation)."""
    return fro_norm_sup(m)


def inf_norm_sup(m):
    """Upper bound on the max row sum of entry magnitudes."""
    mags = m.mag_sup()
    rows = np.sum(mags, axis=1)
    k = mags.shape[1] + 1
    return float(np.max(rows) * (1.0 + k * 3.0 * _U) + 1e-300)


# ---------------------------------------------------------------------------
# rigorous enclosures of floating-point products (BLAS model)
#
# Assumes matrix products are evaluated as floating dot products in some
# association order with round-to-nearest (conventional BLAS; no
# Strassen-type algorithms), so |fl(P@Q) - P@Q| <= sqrt(2)*gamma_{k+4} |P||Q|
# entrywise plus a subnormal term.


def _gamma_up(k):
    g = (k * _U) / (1.0 - k * _U)
    return g * (1.0 + 4.0 * _U)


def abs_upper(p):
    """Entrywise upper bound on |p|: |re| + |im| (exact for real input)."""
    p = np.asarray(p)
    if np.iscomplexobj(p):
        return np.abs(p.real) + np.abs(p.imag)
    return np.abs(p)


def gemm_enclosure(p, q):
    """IMatrix enclosure of the exact product of two point matrices."""
    p = np.asarray(p)
    q = np.asarray(q)
    k = p.shape[1]
    if k != q.shape[0]:
        raise DimensionMismatch(f"inner dimensions {p.shape[1]} vs {q.shape[0]}")
    c = np.asarray(p @ q, dtype=np.complex128)
    e = abs_upper(p) @ abs_upper(q)
    g = _gamma_up(k + 4)
    rad = (math.sqrt(2.0) * 1.0000001) * g * e * (1.0 + g) * (1.0 + 8.0 * _U) \
        + (k + 4) * 1e-315
    return IMatrix.from_midrad(c, rad)


def rowscale_enclosure(d, q):
    """Enclosure of diag(d) @ q for real point vector d and point q."""
    q = np.asarray(q, dtype=np.complex128)
    d = np.asarray(d, dtype=np.float64)[:, None]
    out = np.empty(q.shape + (4,))
    out[..., 0] = _knp.vmul_lo(q.real, d)
    out[..., 1] = _knp.vmul_hi(q.real, d)
    out[..., 2] = _knp.vmul_lo(q.imag, d)
    out[..., 3] = _knp.vmul_hi(q.imag, d)
    return IMatrix(out)


def mm_point_interval_enclosure(p, m):
    """Enclosure of p @ m for point p and interval m (midpoint-radius,
    BLAS-backed)."""
    base = gemm_enclosure(p, m.midpoint())
    k = np.asarray(p).shape[1]
    extra = (abs_upper(p) @ m.radius()) * (1.0 + (k + 4) * 3.0 * _U) + 1e-300
    return base.widen(extra)


def mm_interval_point_enclosure(m, p):
    """Enclosure of m @ p for interval m and point p."""
    base = gemm_enclosure(m.midpoint(), p)
    k = np.asarray(p).shape[0]
    extra = (m.radius() @ abs_upper(p)) * (1.0 + (k + 4) * 3.0 * _U) + 1e-300
    return base.widen(extra)


def point_bandwidth(arr):
    """Largest |i - j| carrying a nonzero entry of a point matrix."""
    arr = np.asarray(arr)
    nz = np.argwhere(arr != 0)
    if nz.size == 0:
        return 0
    return int(np.max(np.abs(nz[:, 0] - nz[:, 1])))
