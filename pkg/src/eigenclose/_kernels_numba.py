"""Numba-compiled interval kernels (same contracts as `_kernels_numpy`)."""

import numpy as np
from numba import njit

from . import _rops

_J = dict(cache=True, nogil=True)

# _rops functions are register_jitable: callable directly inside njit kernels
nb_iadd = _rops.iadd
nb_isub = _rops.isub
nb_imul = _rops.imul
nb_idiv = _rops.idiv
nb_cmul = _rops.cmul
nb_mag_hi = _rops.mag_hi
nb_add_lo = _rops.add_lo
nb_add_hi = _rops.add_hi


@njit(**_J)
def k_add(a, b):
    out = np.empty_like(a)
    r, c, _ = a.shape
    for i in range(r):
        for j in range(c):
            out[i, j, 0], out[i, j, 1] = nb_iadd(a[i, j, 0], a[i, j, 1], b[i, j, 0], b[i, j, 1])
            out[i, j, 2], out[i, j, 3] = nb_iadd(a[i, j, 2], a[i, j, 3], b[i, j, 2], b[i, j, 3])
    return out


@njit(**_J)
def k_sub(a, b):
    out = np.empty_like(a)
    r, c, _ = a.shape
    for i in range(r):
        for j in range(c):
            out[i, j, 0], out[i, j, 1] = nb_isub(a[i, j, 0], a[i, j, 1], b[i, j, 0], b[i, j, 1])
            out[i, j, 2], out[i, j, 3] = nb_isub(a[i, j, 2], a[i, j, 3], b[i, j, 2], b[i, j, 3])
    return out


@njit(**_J)
def k_cscale(zrl, zrh, zil, zih, a):
    out = np.empty_like(a)
    r, c, _ = a.shape
    for i in range(r):
        for j in range(c):
            rl, rh, il, ih = nb_cmul(zrl, zrh, zil, zih,
                                     a[i, j, 0], a[i, j, 1], a[i, j, 2], a[i, j, 3])
            out[i, j, 0] = rl
            out[i, j, 1] = rh
            out[i, j, 2] = il
            out[i, j, 3] = ih
    return out


@njit(**_J)
def k_mm(a, b):
    n, kk, _ = a.shape
    m = b.shape[1]
    out = np.zeros((n, m, 4))
    for i in range(n):
        for j in range(m):
            srl = 0.0
            srh = 0.0
            sil = 0.0
            sih = 0.0
            for t in range(kk):
                rl, rh, il, ih = nb_cmul(a[i, t, 0], a[i, t, 1], a[i, t, 2], a[i, t, 3],
                                         b[t, j, 0], b[t, j, 1], b[t, j, 2], b[t, j, 3])
                srl = nb_add_lo(srl, rl)
                srh = nb_add_hi(srh, rh)
                sil = nb_add_lo(sil, il)
                sih = nb_add_hi(sih, ih)
            out[i, j, 0] = srl
            out[i, j, 1] = srh
            out[i, j, 2] = sil
            out[i, j, 3] = sih
    return out


@njit(**_J)
def k_mm_point_left(pre, pim, b):
    n, kk = pre.shape
    m = b.shape[1]
    out = np.zeros((n, m, 4))
    for i in range(n):
        for j in range(m):
            srl = 0.0
            srh = 0.0
            sil = 0.0
            sih = 0.0
            for t in range(kk):
                rl, rh, il, ih = nb_cmul(pre[i, t], pre[i, t], pim[i, t], pim[i, t],
                                         b[t, j, 0], b[t, j, 1], b[t, j, 2], b[t, j, 3])
                srl = nb_add_lo(srl, rl)
                srh = nb_add_hi(srh, rh)
                sil = nb_add_lo(sil, il)
                sih = nb_add_hi(sih, ih)
            out[i, j, 0] = srl
            out[i, j, 1] = srh
            out[i, j, 2] = sil
            out[i, j, 3] = sih
    return out


@njit(**_J)
def k_mm_point_right(a, qre, qim):
    n, kk, _ = a.shape
    m = qre.shape[1]
    out = np.zeros((n, m, 4))
    for i in range(n):
        for j in range(m):
            srl = 0.0
            srh = 0.0
            sil = 0.0
            sih = 0.0
            for t in range(kk):
                rl, rh, il, ih = nb_cmul(a[i, t, 0], a[i, t, 1], a[i, t, 2], a[i, t, 3],
                                         qre[t, j], qre[t, j], qim[t, j], qim[t, j])
                srl = nb_add_lo(srl, rl)
                srh = nb_add_hi(srh, rh)
                sil = nb_add_lo(sil, il)
                sih = nb_add_hi(sih, ih)
            out[i, j, 0] = srl
            out[i, j, 1] = srh
            out[i, j, 2] = sil
            out[i, j, 3] = sih
    return out


@njit(**_J)
def k_wsum(ystack, weights):
    nn, n, ll, _ = ystack.shape
    kcount = weights.shape[0]
    out = np.zeros((kcount, n, ll, 4))
    for k in range(kcount):
        for i in range(n):
            for j in range(ll):
                srl = 0.0
                srh = 0.0
                sil = 0.0
                sih = 0.0
                for t in range(nn):
                    rl, rh, il, ih = nb_cmul(
                        weights[k, t, 0], weights[k, t, 1], weights[k, t, 2], weights[k, t, 3],
                        ystack[t, i, j, 0], ystack[t, i, j, 1],
                        ystack[t, i, j, 2], ystack[t, i, j, 3])
                    srl = nb_add_lo(srl, rl)
                    srh = nb_add_hi(srh, rh)
                    sil = nb_add_lo(sil, il)
                    sih = nb_add_hi(sih, ih)
                out[k, i, j, 0] = srl
                out[k, i, j, 1] = srh
                out[k, i, j, 2] = sil
                out[k, i, j, 3] = sih
    return out


@njit(**_J)
def k_mag_sup(a):
    r, c, _ = a.shape
    out = np.empty((r, c))
    for i in range(r):
        for j in range(c):
            out[i, j] = nb_mag_hi(a[i, j, 0], a[i, j, 1], a[i, j, 2], a[i, j, 3])
    return out


@njit(**_J)
def k_ldl_pivot_signs(a, bw):
    """Pivot signs of a Hermitian interval LDL^H; a zero-straddling 1x1
    pivot falls back to the adjacent 2x2 block pivot (band-preserving)
    when its determinant interval is certifiably negative."""
    n = a.shape[0]
    neg = 0
    pos = 0
    k = 0
    while k < n:
        dl = a[k, k, 0]
        dh = a[k, k, 1]
        if dl > 0.0 or dh < 0.0:
            if dl > 0.0:
                pos += 1
            else:
                neg += 1
            top = min(k + bw + 2, n - 1)
            for i in range(k + 1, top + 1):
                lrl, lrh = nb_idiv(a[i, k, 0], a[i, k, 1], dl, dh)
                lil, lih = nb_idiv(a[i, k, 2], a[i, k, 3], dl, dh)
                for j in range(k + 1, i + 1):
                    rl, rh, il, ih = nb_cmul(lrl, lrh, lil, lih,
                                             a[j, k, 0], a[j, k, 1],
                                             -a[j, k, 3], -a[j, k, 2])
                    a[i, j, 0] = nb_add_lo(a[i, j, 0], -rh)
                    a[i, j, 1] = nb_add_hi(a[i, j, 1], -rl)
                    a[i, j, 2] = nb_add_lo(a[i, j, 2], -ih)
                    a[i, j, 3] = nb_add_hi(a[i, j, 3], -il)
            k += 1
            continue
        if k == n - 1:
            return neg, pos, False
        # 2x2 pivot P = [[d1, conj(c)], [c, d2]] with c = a[k+1, k]
        d2l = a[k + 1, k + 1, 0]
        d2h = a[k + 1, k + 1, 1]
        crl = a[k + 1, k, 0]
        crh = a[k + 1, k, 1]
        cil = a[k + 1, k, 2]
        cih = a[k + 1, k, 3]
        sq1l, sq1h = nb_imul(crl, crh, crl, crh)
        sq2l, sq2h = nb_imul(cil, cih, cil, cih)
        c2l, c2h = nb_iadd(sq1l, sq1h, sq2l, sq2h)
        d12l, d12h = nb_imul(dl, dh, d2l, d2h)
        detl, deth = nb_isub(d12l, d12h, c2l, c2h)
        if not deth < 0.0:
            return neg, pos, False
        neg += 1
        pos += 1
        top = min(k + bw + 2, n - 1)
        for i in range(k + 2, top + 1):
            w1rl = a[i, k, 0]
            w1rh = a[i, k, 1]
            w1il = a[i, k, 2]
            w1ih = a[i, k, 3]
            w2rl = a[i, k + 1, 0]
            w2rh = a[i, k + 1, 1]
            w2il = a[i, k + 1, 2]
            w2ih = a[i, k + 1, 3]
            # l1 = (w1 d2 - w2 c)/det, l2 = (w2 d1 - w1 conj(c))/det
            t1 = nb_cmul(w1rl, w1rh, w1il, w1ih, d2l, d2h, 0.0, 0.0)
            t2 = nb_cmul(w2rl, w2rh, w2il, w2ih, crl, crh, cil, cih)
            l1rl, l1rh = nb_isub(t1[0], t1[1], t2[0], t2[1])
            l1il, l1ih = nb_isub(t1[2], t1[3], t2[2], t2[3])
            t3 = nb_cmul(w2rl, w2rh, w2il, w2ih, dl, dh, 0.0, 0.0)
            t4 = nb_cmul(w1rl, w1rh, w1il, w1ih, crl, crh, -cih, -cil)
            l2rl, l2rh = nb_isub(t3[0], t3[1], t4[0], t4[1])
            l2il, l2ih = nb_isub(t3[2], t3[3], t4[2], t4[3])
            l1rl, l1rh = nb_idiv(l1rl, l1rh, detl, deth)
            l1il, l1ih = nb_idiv(l1il, l1ih, detl, deth)
            l2rl, l2rh = nb_idiv(l2rl, l2rh, detl, deth)
            l2il, l2ih = nb_idiv(l2il, l2ih, detl, deth)
            for j in range(k + 2, i + 1):
                u1 = nb_cmul(l1rl, l1rh, l1il, l1ih,
                             a[j, k, 0], a[j, k, 1], -a[j, k, 3], -a[j, k, 2])
                u2 = nb_cmul(l2rl, l2rh, l2il, l2ih,
                             a[j, k + 1, 0], a[j, k + 1, 1],
                             -a[j, k + 1, 3], -a[j, k + 1, 2])
                url, urh = nb_iadd(u1[0], u1[1], u2[0], u2[1])
                uil, uih = nb_iadd(u1[2], u1[3], u2[2], u2[3])
                a[i, j, 0] = nb_add_lo(a[i, j, 0], -urh)
                a[i, j, 1] = nb_add_hi(a[i, j, 1], -url)
                a[i, j, 2] = nb_add_lo(a[i, j, 2], -uih)
                a[i, j, 3] = nb_add_hi(a[i, j, 3], -uil)
        k += 2
    return neg, pos, True
