"""Directed scalar endpoint arithmetic.

Every function here takes/returns plain floats and is registered as
numba-jitable, so the compiled kernels reuse this exact logic while plain
Python callers see ordinary functions.  Rounding direction is obtained from
error-free transformations
(2Sum / Dekker product): the round-to-nearest result is nudged one float
outward only when the operation was inexact in that direction, so exact
operations stay exact (0 + x, integer sums, products of small integers,
multiplications by powers of two, ...).
"""

import math

try:
    from numba.extending import register_jitable as _jitable
except ImportError:          # pure-Python fallback when numba is absent
    def _jitable(f):
        return f

_SPLITTER = 134217729.0        # 2**27 + 1, Dekker splitting constant
_SPLIT_GUARD = 6.69692879491417e153   # ~2**511: operands above this overflow the split
_UFL_GUARD = 4.008336720017946e-292   # 2**-968: products below this may lose the error term
_INF = math.inf


@_jitable
def two_sum_err(a, b, s):
    """Rounding error of s = fl(a+b); exact for all finite inputs."""
    bp = s - a
    return (a - (s - bp)) + (b - bp)


@_jitable
def two_prod_err(a, b, p):
    """Rounding error of p = fl(a*b), or nan when not representable."""
    if abs(a) > _SPLIT_GUARD or abs(b) > _SPLIT_GUARD:
        return math.nan
    if abs(p) < _UFL_GUARD:
        return math.nan
    aa = a * _SPLITTER
    ahi = aa - (aa - a)
    alo = a - ahi
    bb = b * _SPLITTER
    bhi = bb - (bb - b)
    blo = b - bhi
    return ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


@_jitable
def add_lo(a, b):
    s = a + b
    if not math.isfinite(s):
        if math.isnan(s):          # (-inf) + (+inf): no information
            return -_INF
        return math.nextafter(s, -_INF)
    if two_sum_err(a, b, s) < 0.0:
        return math.nextafter(s, -_INF)
    return s


@_jitable
def add_hi(a, b):
    s = a + b
    if not math.isfinite(s):
        if math.isnan(s):
            return _INF
        return math.nextafter(s, _INF)
    if two_sum_err(a, b, s) > 0.0:
        return math.nextafter(s, _INF)
    return s


@_jitable
def sub_lo(a, b):
    return add_lo(a, -b)


@_jitable
def sub_hi(a, b):
    return add_hi(a, -b)


@_jitable
def mul_lo(a, b):
    if a == 0.0 or b == 0.0:
        return 0.0
    p = a * b
    if not math.isfinite(p):
        if math.isnan(p):
            return -_INF
        return math.nextafter(p, -_INF)
    e = two_prod_err(a, b, p)
    if math.isnan(e) or e < 0.0:
        return math.nextafter(p, -_INF)
    return p


@_jitable
def mul_hi(a, b):
    if a == 0.0 or b == 0.0:
        return 0.0
    p = a * b
    if not math.isfinite(p):
        if math.isnan(p):
            return _INF
        return math.nextafter(p, _INF)
    e = two_prod_err(a, b, p)
    if math.isnan(e) or e > 0.0:
        return math.nextafter(p, _INF)
    return p


@_jitable
def div_lo(a, b):
    if a == 0.0:
        return 0.0
    q = a / b
    if not math.isfinite(q):
        if math.isnan(q):
            return -_INF
        return math.nextafter(q, -_INF)
    p = q * b
    e = two_prod_err(q, b, p)
    if math.isnan(e) or not math.isfinite(p):
        return math.nextafter(q, -_INF)
    # exact residual sign: a - q*b = (a - p) - e with a - p exact (Sterbenz)
    d1 = a - p
    if d1 == e:
        return q
    # correction sign = sign(a - q*b) * sign(b)
    if (d1 > e) == (b > 0.0):
        return q
    return math.nextafter(q, -_INF)


@_jitable
def div_hi(a, b):
    if a == 0.0:
        return 0.0
    q = a / b
    if not math.isfinite(q):
        if math.isnan(q):
            return _INF
        return math.nextafter(q, _INF)
    p = q * b
    e = two_prod_err(q, b, p)
    if math.isnan(e) or not math.isfinite(p):
        return math.nextafter(q, _INF)
    d1 = a - p
    if d1 == e:
        return q
    if (d1 > e) == (b > 0.0):
        return math.nextafter(q, _INF)
    return q


@_jitable
def sqrt_lo(a):
    if a <= 0.0:
        return 0.0
    r = math.sqrt(a)
    if not math.isfinite(r):
        return math.nextafter(r, -_INF)
    p = r * r
    e = two_prod_err(r, r, p)
    if math.isnan(e) or not math.isfinite(p):
        return math.nextafter(r, -_INF)
    d1 = a - p
    if d1 >= e:        # a >= r*r exactly: r does not overshoot
        return r
    return math.nextafter(r, -_INF)


@_jitable
def sqrt_hi(a):
    if a <= 0.0:
        return 0.0
    r = math.sqrt(a)
    if not math.isfinite(r):
        return r
    p = r * r
    e = two_prod_err(r, r, p)
    if math.isnan(e) or not math.isfinite(p):
        return math.nextafter(r, _INF)
    d1 = a - p
    if d1 <= e:        # a <= r*r exactly: r does not undershoot
        return r
    return math.nextafter(r, _INF)


@_jitable
def iadd(al, au, bl, bu):
    return add_lo(al, bl), add_hi(au, bu)


@_jitable
def isub(al, au, bl, bu):
    return add_lo(al, -bu), add_hi(au, -bl)


@_jitable
def imul(al, au, bl, bu):
    """Sign-case interval product with directed endpoint rounding."""
    if al >= 0.0:
        if bl >= 0.0:
            return mul_lo(al, bl), mul_hi(au, bu)
        if bu <= 0.0:
            return mul_lo(au, bl), mul_hi(al, bu)
        return mul_lo(au, bl), mul_hi(au, bu)
    if au <= 0.0:
        if bl >= 0.0:
            return mul_lo(al, bu), mul_hi(au, bl)
        if bu <= 0.0:
            return mul_lo(au, bu), mul_hi(al, bl)
        return mul_lo(al, bu), mul_hi(al, bl)
    if bl >= 0.0:
        return mul_lo(al, bu), mul_hi(au, bu)
    if bu <= 0.0:
        return mul_lo(au, bl), mul_hi(al, bl)
    return min(mul_lo(al, bu), mul_lo(au, bl)), max(mul_hi(al, bl), mul_hi(au, bu))


@_jitable
def idiv(al, au, bl, bu):
    """Interval quotient; caller must have rejected 0 in [bl, bu]."""
    if bl > 0.0:
        if al >= 0.0:
            return div_lo(al, bu), div_hi(au, bl)
        if au <= 0.0:
            return div_lo(al, bl), div_hi(au, bu)
        return div_lo(al, bl), div_hi(au, bl)
    # bu < 0
    if al >= 0.0:
        return div_lo(au, bu), div_hi(al, bl)
    if au <= 0.0:
        return div_lo(au, bl), div_hi(al, bu)
    return div_lo(au, bu), div_hi(al, bu)


@_jitable
def isqrt(al, au):
    return sqrt_lo(al), sqrt_hi(au)


@_jitable
def cmul(arl, aru, ail, aiu, brl, bru, bil, biu):
    """Rectangular complex interval product: (a_re + i a_im)(b_re + i b_im)."""
    acl, ach = imul(arl, aru, brl, bru)
    bdl, bdh = imul(ail, aiu, bil, biu)
    adl, adh = imul(arl, aru, bil, biu)
    bcl, bch = imul(ail, aiu, brl, bru)
    rl, rh = isub(acl, ach, bdl, bdh)
    il, ih = iadd(adl, adh, bcl, bch)
    return rl, rh, il, ih


@_jitable
def cmul_acc(arl, aru, ail, aiu, brl, bru, bil, biu, srl, sru, sil, siu):
    """s += a*b for rectangular complex intervals; returns updated s."""
    rl, rh, il, ih = cmul(arl, aru, ail, aiu, brl, bru, bil, biu)
    srl, sru = iadd(srl, sru, rl, rh)
    sil, siu = iadd(sil, siu, il, ih)
    return srl, sru, sil, siu


@_jitable
def mag_hi(rl, rh, il, ih):
    """Upper bound on |z| over the rectangle."""
    mr = max(abs(rl), abs(rh))
    mi = max(abs(il), abs(ih))
    return sqrt_hi(add_hi(mul_hi(mr, mr), mul_hi(mi, mi)))
