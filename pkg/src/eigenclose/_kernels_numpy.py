"""Pure-numpy implementations of the hot interval kernels.

Interval matrices travel as float64 arrays of shape (r, c, 4) with planes
(re_inf, re_sup, im_inf, im_sup).  Everything here mirrors the scalar logic
in `_rops` with vectorized error-free transformations, so results stay
containment-correct and deterministic.
"""

import numpy as np

_SPLITTER = 134217729.0
_SPLIT_GUARD = 6.69692879491417e153
_UFL_GUARD = 4.008336720017946e-292
_INF = np.inf


def _vtwo_sum_err(a, b, s):
    bp = s - a
    return (a - (s - bp)) + (b - bp)


def vadd_lo(a, b):
    with np.errstate(invalid="ignore"):
        s = a + b
        e = _vtwo_sum_err(a, b, s)
        out = np.where(e < 0.0, np.nextafter(s, -_INF), s)
        bad = ~np.isfinite(s)
        if bad.any():
            out = np.where(bad, np.where(np.isnan(s), -_INF,
                                         np.nextafter(s, -_INF)), out)
    return out


def vadd_hi(a, b):
    with np.errstate(invalid="ignore"):
        s = a + b
        e = _vtwo_sum_err(a, b, s)
        out = np.where(e > 0.0, np.nextafter(s, _INF), s)
        bad = ~np.isfinite(s)
        if bad.any():
            out = np.where(bad, np.where(np.isnan(s), _INF,
                                         np.nextafter(s, _INF)), out)
    return out


def _vtwo_prod_err(a, b, p):
    """Error array with nan where the split/underflow guards trip."""
    with np.errstate(over="ignore", invalid="ignore"):
        aa = a * _SPLITTER
        ahi = aa - (aa - a)
        alo = a - ahi
        bb = b * _SPLITTER
        bhi = bb - (bb - b)
        blo = b - bhi
        e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    bad = (np.abs(a) > _SPLIT_GUARD) | (np.abs(b) > _SPLIT_GUARD) | (np.abs(p) < _UFL_GUARD)
    return np.where(bad, np.nan, e)


def vmul_lo(a, b):
    with np.errstate(invalid="ignore", over="ignore"):
        p = a * b
        e = _vtwo_prod_err(a, b, p)
        out = np.where(np.isnan(e) | (e < 0.0), np.nextafter(p, -_INF), p)
        bad = ~np.isfinite(p)
        if bad.any():
            out = np.where(bad, np.where(np.isnan(p), -_INF, np.nextafter(p, -_INF)), out)
    return np.where((a == 0.0) | (b == 0.0), 0.0, out)


def vmul_hi(a, b):
    with np.errstate(invalid="ignore", over="ignore"):
        p = a * b
        e = _vtwo_prod_err(a, b, p)
        out = np.where(np.isnan(e) | (e > 0.0), np.nextafter(p, _INF), p)
        bad = ~np.isfinite(p)
        if bad.any():
            out = np.where(bad, np.where(np.isnan(p), _INF, np.nextafter(p, _INF)), out)
    return np.where((a == 0.0) | (b == 0.0), 0.0, out)


def vtwo_sum(a, b):
    """(s, e) with s + e = a + b exactly (finite inputs)."""
    s = a + b
    return s, _vtwo_sum_err(a, b, s)


def vtwo_prod(a, b):
    """(p, e, bad): p + e = a*b exactly where bad is False; where bad is
    True the error term is unrepresentable and e is zero."""
    with np.errstate(over="ignore", invalid="ignore"):
        p = a * b
        e = _vtwo_prod_err(a, b, p)
    bad = np.isnan(e) | ~np.isfinite(p)
    zero = (a == 0.0) | (b == 0.0)
    e = np.where(bad | zero, 0.0, e)
    return p, e, bad & ~zero


def vimul(al, au, bl, bu):
    """Interval product via all four directed candidate products."""
    c1l, c1h = vmul_lo(al, bl), vmul_hi(al, bl)
    c2l, c2h = vmul_lo(al, bu), vmul_hi(al, bu)
    c3l, c3h = vmul_lo(au, bl), vmul_hi(au, bl)
    c4l, c4h = vmul_lo(au, bu), vmul_hi(au, bu)
    lo = np.minimum(np.minimum(c1l, c2l), np.minimum(c3l, c4l))
    hi = np.maximum(np.maximum(c1h, c2h), np.maximum(c3h, c4h))
    return lo, hi


def viadd(al, au, bl, bu):
    return vadd_lo(al, bl), vadd_hi(au, bu)


def visub(al, au, bl, bu):
    return vadd_lo(al, -bu), vadd_hi(au, -bl)


def vcmul(arl, aru, ail, aiu, brl, bru, bil, biu):
    acl, ach = vimul(arl, aru, brl, bru)
    bdl, bdh = vimul(ail, aiu, bil, biu)
    adl, adh = vimul(arl, aru, bil, biu)
    bcl, bch = vimul(ail, aiu, brl, bru)
    rl, rh = visub(acl, ach, bdl, bdh)
    il, ih = viadd(adl, adh, bcl, bch)
    return rl, rh, il, ih


def vsqrt_hi(s):
    """Upper bound on sqrt(s) for s >= 0, exact when representable."""
    with np.errstate(invalid="ignore"):
        r = np.sqrt(s)
        p, e, bad = vtwo_prod(r, r)
        d1 = s - p
        out = np.where(bad | (d1 > e), np.nextafter(r, _INF), r)
    return np.where(s > 0.0, out, 0.0)


def vmag_hi(rl, rh, il, ih):
    mr = np.maximum(np.abs(rl), np.abs(rh))
    mi = np.maximum(np.abs(il), np.abs(ih))
    return vsqrt_hi(vadd_hi(vmul_hi(mr, mr), vmul_hi(mi, mi)))


# ---------------------------------------------------------------------------
# matrix kernels on (r, c, 4) arrays


def k_add(a, b):
    out = np.empty_like(a)
    out[..., 0] = vadd_lo(a[..., 0], b[..., 0])
    out[..., 1] = vadd_hi(a[..., 1], b[..., 1])
    out[..., 2] = vadd_lo(a[..., 2], b[..., 2])
    out[..., 3] = vadd_hi(a[..., 3], b[..., 3])
    return out


def k_sub(a, b):
    out = np.empty_like(a)
    out[..., 0] = vadd_lo(a[..., 0], -b[..., 1])
    out[..., 1] = vadd_hi(a[..., 1], -b[..., 0])
    out[..., 2] = vadd_lo(a[..., 2], -b[..., 3])
    out[..., 3] = vadd_hi(a[..., 3], -b[..., 2])
    return out


def k_cscale(zrl, zrh, zil, zih, a):
    """Scalar complex interval times interval matrix."""
    rl, rh, il, ih = vcmul(
        np.full(a.shape[:-1], zrl), np.full(a.shape[:-1], zrh),
        np.full(a.shape[:-1], zil), np.full(a.shape[:-1], zih),
        a[..., 0], a[..., 1], a[..., 2], a[..., 3])
    return np.stack([rl, rh, il, ih], axis=-1)


def k_mm(a, b):
    """Exact rectangular interval matrix product, (n,k,4) @ (k,m,4)."""
    n, kk, _ = a.shape
    _, m, _ = b.shape
    srl = np.zeros((n, m))
    srh = np.zeros((n, m))
    sil = np.zeros((n, m))
    sih = np.zeros((n, m))
    for t in range(kk):
        arl = a[:, t, 0][:, None]
        arh = a[:, t, 1][:, None]
        ail = a[:, t, 2][:, None]
        aih = a[:, t, 3][:, None]
        brl = b[t, :, 0][None, :]
        brh = b[t, :, 1][None, :]
        bil = b[t, :, 2][None, :]
        bih = b[t, :, 3][None, :]
        rl, rh, il, ih = vcmul(arl * np.ones((1, m)), arh * np.ones((1, m)),
                               ail * np.ones((1, m)), aih * np.ones((1, m)),
                               brl * np.ones((n, 1)), brh * np.ones((n, 1)),
                               bil * np.ones((n, 1)), bih * np.ones((n, 1)))
        srl = vadd_lo(srl, rl)
        srh = vadd_hi(srh, rh)
        sil = vadd_lo(sil, il)
        sih = vadd_hi(sih, ih)
    return np.stack([srl, srh, sil, sih], axis=-1)


def k_mm_point_left(pre, pim, b):
    """Point complex matrix (re, im) times interval matrix."""
    n, kk = pre.shape
    _, m, _ = b.shape
    a = np.empty((n, kk, 4))
    a[..., 0] = pre
    a[..., 1] = pre
    a[..., 2] = pim
    a[..., 3] = pim
    return k_mm(a, b)


def k_mm_point_right(a, qre, qim):
    kk, m = qre.shape
    b = np.empty((kk, m, 4))
    b[..., 0] = qre
    b[..., 1] = qre
    b[..., 2] = qim
    b[..., 3] = qim
    return k_mm(a, b)


def k_wsum(ystack, weights):
    """out[k] = sum_j weights[k, j] * ystack[j].

    ystack: (N, n, L, 4); weights: (K, N, 4) complex interval scalars.
    """
    nn, n, ll, _ = ystack.shape
    kcount = weights.shape[0]
    out = np.zeros((kcount, n, ll, 4))
    for k in range(kcount):
        srl = np.zeros((n, ll))
        srh = np.zeros((n, ll))
        sil = np.zeros((n, ll))
        sih = np.zeros((n, ll))
        for j in range(nn):
            w = weights[k, j]
            rl, rh, il, ih = vcmul(
                np.full((n, ll), w[0]), np.full((n, ll), w[1]),
                np.full((n, ll), w[2]), np.full((n, ll), w[3]),
                ystack[j, :, :, 0], ystack[j, :, :, 1],
                ystack[j, :, :, 2], ystack[j, :, :, 3])
            srl = vadd_lo(srl, rl)
            srh = vadd_hi(srh, rh)
            sil = vadd_lo(sil, il)
            sih = vadd_hi(sih, ih)
        out[k, :, :, 0] = srl
        out[k, :, :, 1] = srh
        out[k, :, :, 2] = sil
        out[k, :, :, 3] = sih
    return out


def k_mag_sup(a):
    return vmag_hi(a[..., 0], a[..., 1], a[..., 2], a[..., 3])


def k_ldl_pivot_signs(a, bw):
    """Pivot sign count of a Hermitian interval matrix via in-place LDL^H.

    Returns (neg, pos, ok); ok False when neither a 1x1 pivot nor the
    band-preserving adjacent 2x2 block pivot certifies.  `a` is consumed
    as scratch; trailing updates run as vectorized outer products.
    """
    n = a.shape[0]
    neg = 0
    pos = 0
    k = 0
    while k < n:
        # Hermitian members have real pivots: use the real-part range
        dl = a[k, k, 0]
        dh = a[k, k, 1]
        if dl > 0.0 or dh < 0.0:
            if dl > 0.0:
                pos += 1
            else:
                neg += 1
            top = min(k + bw + 2, n - 1)
            if top > k:
                col = a[k + 1:top + 1, k, :].copy()
                lrl, lrh = _vidiv_real(col[:, 0], col[:, 1], dl, dh)
                lil, lih = _vidiv_real(col[:, 2], col[:, 3], dl, dh)
                rl, rh, il, ih = vcmul(
                    lrl[:, None], lrh[:, None], lil[:, None], lih[:, None],
                    col[None, :, 0], col[None, :, 1],
                    -col[None, :, 3], -col[None, :, 2])
                _update_block(a, k + 1, top + 1, rl, rh, il, ih)
            k += 1
            continue
        if k == n - 1:
            return neg, pos, False
        # 2x2 pivot P = [[d1, conj(c)], [c, d2]] with c = a[k+1, k]
        d2l, d2h = a[k + 1, k + 1, 0], a[k + 1, k + 1, 1]
        crl, crh, cil, cih = a[k + 1, k]
        sq1 = _siprod(crl, crh, crl, crh)
        sq2 = _siprod(cil, cih, cil, cih)
        c2l, c2h = sq1[0] + sq2[0], sq1[1] + sq2[1]
        c2l, c2h = np.nextafter(c2l, -_INF), np.nextafter(c2h, _INF)
        d12 = _siprod(dl, dh, d2l, d2h)
        detl = np.nextafter(d12[0] - c2h, -_INF)
        deth = np.nextafter(d12[1] - c2l, _INF)
        if not deth < 0.0:
            return neg, pos, False
        neg += 1
        pos += 1
        top = min(k + bw + 2, n - 1)
        if top >= k + 2:
            w1 = a[k + 2:top + 1, k, :].copy()
            w2 = a[k + 2:top + 1, k + 1, :].copy()
            ones = np.ones(top - k - 1)
            # l1 = (w1 d2 - w2 c)/det, l2 = (w2 d1 - w1 conj(c))/det
            t1 = vcmul(w1[:, 0], w1[:, 1], w1[:, 2], w1[:, 3],
                       d2l * ones, d2h * ones, 0.0 * ones, 0.0 * ones)
            t2 = vcmul(w2[:, 0], w2[:, 1], w2[:, 2], w2[:, 3],
                       crl * ones, crh * ones, cil * ones, cih * ones)
            l1r = visub(t1[0], t1[1], t2[0], t2[1])
            l1i = visub(t1[2], t1[3], t2[2], t2[3])
            t3 = vcmul(w2[:, 0], w2[:, 1], w2[:, 2], w2[:, 3],
                       dl * ones, dh * ones, 0.0 * ones, 0.0 * ones)
            t4 = vcmul(w1[:, 0], w1[:, 1], w1[:, 2], w1[:, 3],
                       crl * ones, crh * ones, -cih * ones, -cil * ones)
            l2r = visub(t3[0], t3[1], t4[0], t4[1])
            l2i = visub(t3[2], t3[3], t4[2], t4[3])
            l1rl, l1rh = _vidiv_real(l1r[0], l1r[1], detl, deth)
            l1il, l1ih = _vidiv_real(l1i[0], l1i[1], detl, deth)
            l2rl, l2rh = _vidiv_real(l2r[0], l2r[1], detl, deth)
            l2il, l2ih = _vidiv_real(l2i[0], l2i[1], detl, deth)
            u1 = vcmul(l1rl[:, None], l1rh[:, None], l1il[:, None], l1ih[:, None],
                       w1[None, :, 0], w1[None, :, 1], -w1[None, :, 3], -w1[None, :, 2])
            u2 = vcmul(l2rl[:, None], l2rh[:, None], l2il[:, None], l2ih[:, None],
                       w2[None, :, 0], w2[None, :, 1], -w2[None, :, 3], -w2[None, :, 2])
            rl = vadd_lo(u1[0], u2[0])
            rh = vadd_hi(u1[1], u2[1])
            il = vadd_lo(u1[2], u2[2])
            ih = vadd_hi(u1[3], u2[3])
            _update_block(a, k + 2, top + 1, rl, rh, il, ih)
        k += 2
    return neg, pos, True


def _update_block(a, lo, hi, rl, rh, il, ih):
    blk = a[lo:hi, lo:hi]
    blk[..., 0] = vadd_lo(blk[..., 0], -rh)
    blk[..., 1] = vadd_hi(blk[..., 1], -rl)
    blk[..., 2] = vadd_lo(blk[..., 2], -ih)
    blk[..., 3] = vadd_hi(blk[..., 3], -il)


def _siprod(al, au, bl, bu):
    """Scalar interval product endpoints (python floats)."""
    cands = (al * bl, al * bu, au * bl, au * bu)
    return (np.nextafter(min(cands), -_INF), np.nextafter(max(cands), _INF))


def _vidiv_real(al, au, bl, bu):
    """[al,au] / [bl,bu] with 0 not in b, b real, vectorized over a."""
    c1l, c1h = _vdiv_lo(al, bl), _vdiv_hi(al, bl)
    c2l, c2h = _vdiv_lo(al, bu), _vdiv_hi(al, bu)
    c3l, c3h = _vdiv_lo(au, bl), _vdiv_hi(au, bl)
    c4l, c4h = _vdiv_lo(au, bu), _vdiv_hi(au, bu)
    lo = np.minimum(np.minimum(c1l, c2l), np.minimum(c3l, c4l))
    hi = np.maximum(np.maximum(c1h, c2h), np.maximum(c3h, c4h))
    return lo, hi


def _vdiv_lo(a, b):
    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        q = a / b
        out = np.nextafter(q, -_INF)
        out = np.where(np.isnan(q), -_INF, out)
    return np.where(a == 0.0, 0.0, out)


def _vdiv_hi(a, b):
    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        q = a / b
        out = np.nextafter(q, _INF)
        out = np.where(np.isnan(q), _INF, out)
    return np.where(a == 0.0, 0.0, out)
