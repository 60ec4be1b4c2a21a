import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from eigenclose.errors import DivByZeroInterval
from eigenclose.interval import (CInterval, IMatrix, RInterval, c_div, c_mul,
                                 enclose_pi, enclose_sincos, fro_norm_sup,
                                 gemm_enclosure, imat_mul, magnitude_sup,
                                 r_add, r_div, r_mul, r_sub, two_norm_sup)

mpmath.mp.dps = 40


def test_add_exact_endpoints():
    s = r_add(RInterval(1, 2), RInterval(3, 4))
    assert (s.inf, s.sup) == (4.0, 6.0)


def test_mul_sign_cases():
    m = r_mul(RInterval(-1, 1), RInterval(-1, 1))
    assert (m.inf, m.sup) == (-1.0, 1.0)


def test_div_third_two_ulp():
    t = r_div(RInterval(1), RInterval(3))
    third = mpmath.mpf(1) / 3
    assert t.inf <= third <= t.sup
    assert t.width() <= 2 * math.ulp(1.0 / 3.0)


def test_div_by_zero_interval():
    with pytest.raises(DivByZeroInterval):
        r_div(RInterval(1), RInterval(-1, 1))


def test_sub_containment():
    d = r_sub(RInterval(0.1), RInterval(0.3))
    exact = mpmath.mpf(0.1) - mpmath.mpf(0.3)     # binary values, exact diff
    assert d.inf <= exact <= d.sup
    assert d.inf <= 0.1 - 0.3 <= d.sup


def test_c_mul_identity_and_i_squared():
    one = CInterval.point(1.0)
    z = CInterval.point(0.7 - 0.2j)
    assert c_mul(one, z).contains(0.7 - 0.2j)
    ii = CInterval.point(1j)
    sq = c_mul(ii, ii)
    assert sq.contains(-1.0 + 0.0j)


def test_c_mul_random_points_extended_precision():
    rng = np.random.default_rng(5)
    for _ in range(200):
        a = complex(*rng.standard_normal(2))
        b = complex(*rng.standard_normal(2))
        prod = c_mul(CInterval.point(a), CInterval.point(b))
        exact_re = Fraction(a.real) * Fraction(b.real) - Fraction(a.imag) * Fraction(b.imag)
        exact_im = Fraction(a.real) * Fraction(b.imag) + Fraction(a.imag) * Fraction(b.real)
        assert Fraction(prod.re.inf) <= exact_re <= Fraction(prod.re.sup)
        assert Fraction(prod.im.inf) <= exact_im <= Fraction(prod.im.sup)


def test_c_div_roundtrip():
    z = CInterval.point(2.0 + 1.0j)
    w = CInterval.point(1.0 - 3.0j)
    q = c_div(z, w)
    assert q.contains((2.0 + 1.0j) / (1.0 - 3.0j))


def test_enclose_pi():
    pi = enclose_pi()
    assert pi.inf <= mpmath.pi() <= pi.sup
    assert pi.width() <= 4 * math.ulp(math.pi)


def test_sincos_zero():
    s, c = enclose_sincos(RInterval(0.0))
    assert s.contains(0.0) and s.width() <= 1e-16
    assert c.contains(1.0)


def test_cos_pi_contains_minus_one():
    _, c = enclose_sincos(enclose_pi())
    assert c.contains(-1.0)


def test_sin_pi_sixth_contains_half():
    s, _ = enclose_sincos(enclose_pi() / RInterval(6))
    assert s.contains(0.5)


def test_sincos_random_against_mpmath():
    rng = np.random.default_rng(7)
    for _ in range(300):
        x = float(rng.uniform(-30, 30))
        s, c = enclose_sincos(RInterval(x))
        assert s.inf <= mpmath.sin(x) <= s.sup
        assert c.inf <= mpmath.cos(x) <= c.sup
        assert s.width() < 1e-14 and c.width() < 1e-14


def test_magnitude_sup_pythagorean():
    z = CInterval.point(3.0 + 4.0j)
    m = magnitude_sup(z)
    assert 5.0 <= m <= 5.0 * (1 + 1e-12)


def test_fro_norm_identity():
    m = fro_norm_sup(IMatrix.eye(3))
    assert math.sqrt(3) <= m <= math.sqrt(3) + 1e-12
    assert two_norm_sup(IMatrix.eye(3)) >= 1.0


def test_fro_norm_random_extended():
    rng = np.random.default_rng(9)
    a = rng.standard_normal((6, 4))
    m = IMatrix.from_point(a)
    exact = mpmath.sqrt(mpmath.fsum([mpmath.mpf(x) ** 2 for x in a.ravel()]))
    assert fro_norm_sup(m) >= exact


def test_imat_mul_identity():
    rng = np.random.default_rng(11)
    a = IMatrix.from_point(rng.standard_normal((4, 4)))
    prod = imat_mul(IMatrix.eye(4), a)
    assert prod.contains_matrix(a)


def test_imat_mul_exact_rational():
    rng = np.random.default_rng(13)
    p = rng.standard_normal((2, 2))
    q = rng.standard_normal((2, 2))
    prod = imat_mul(IMatrix.from_point(p), IMatrix.from_point(q))
    for i in range(2):
        for j in range(2):
            exact = sum(Fraction(p[i, k]) * Fraction(q[k, j]) for k in range(2))
            e = prod.entry(i, j)
            assert Fraction(e.re.inf) <= exact <= Fraction(e.re.sup)


def test_imat_mul_zero():
    rng = np.random.default_rng(15)
    a = IMatrix.from_point(rng.standard_normal((3, 3)))
    z = imat_mul(a, IMatrix.zeros(3, 3))
    assert z.contains_point_matrix(np.zeros((3, 3)))


def test_matrix_midpoint_radius_cover():
    data = np.zeros((1, 1, 4))
    data[0, 0] = [1.0, 2.0, -0.5, 0.25]
    m = IMatrix(data)
    mid = m.midpoint()[0, 0]
    rad = m.radius()[0, 0]
    for re in (1.0, 2.0):
        for im in (-0.5, 0.25):
            assert abs(complex(re, im) - mid) <= rad


def test_monotonicity_widening_inputs():
    rng = np.random.default_rng(17)
    for _ in range(100):
        a, b = sorted(rng.standard_normal(2))
        c, d = sorted(rng.standard_normal(2))
        x, y = RInterval(a, b), RInterval(c, d)
        xw, yw = x.widened(0.1), y.widened(0.1)
        for op in (r_add, r_sub, r_mul):
            assert op(xw, yw).contains_interval(op(x, y))


def test_determinism_bit_identical():
    rng = np.random.default_rng(19)
    a = IMatrix.from_point(rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8)))
    b = IMatrix.from_point(rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8)))
    p1 = imat_mul(a, b)
    p2 = imat_mul(a, b)
    assert np.array_equal(p1.data, p2.data)


def test_gemm_enclosure_contains_exact():
    rng = np.random.default_rng(21)
    p = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    q = rng.standard_normal((8, 3)) + 1j * rng.standard_normal((8, 3))
    enc = gemm_enclosure(p, q)
    exact = np.empty((8, 3), dtype=complex)
    for i in range(8):
        for j in range(3):
            re = sum(Fraction(p[i, k].real) * Fraction(q[k, j].real)
                     - Fraction(p[i, k].imag) * Fraction(q[k, j].imag)
                     for k in range(8))
            im = sum(Fraction(p[i, k].real) * Fraction(q[k, j].imag)
                     + Fraction(p[i, k].imag) * Fraction(q[k, j].real)
                     for k in range(8))
            exact[i, j] = complex(float(re), float(im))
            e = enc.entry(i, j)
            assert e.re.inf <= re <= e.re.sup
            assert e.im.inf <= im <= e.im.sup


def test_hermitianize_tightens():
    rng = np.random.default_rng(23)
    h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = h + h.conj().T
    m = IMatrix.from_point(h).widen(1e-10)
    tight = m.hermitianize()
    assert tight.contains_point_matrix(h)
    assert m.contains_matrix(tight)


def test_widen_negative_rejected():
    with pytest.raises(ValueError):
        IMatrix.eye(2).widen(-1.0)


def test_nan_rejected():
    with pytest.raises(ValueError):
        RInterval(float("nan"), 1.0)
    data = np.zeros((1, 1, 4))
    data[0, 0, 0] = float("nan")
    with pytest.raises(ValueError):
        IMatrix(data)
