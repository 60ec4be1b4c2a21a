"""Test-problem generators, probe matrices, and Matrix Market I/O."""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigError
from .interval import IMatrix, RInterval, enclose_pi, enclose_sincos
from .linalg import Perturbation
from .moments import ProblemSpec

_B_STREAM = 0xB
_V_STREAM = 0x5EED


def _philox(seed, stream):
    key = np.array([np.uint64(seed), np.uint64(stream)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _box_muller(gen, count):
    """Standard normals via Box-Muller from Philox uniforms."""
    half = (count + 1) // 2
    u1 = 1.0 - gen.random(half)          # (0, 1]
    u2 = gen.random(half)
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.concatenate([r * np.cos(2.0 * np.pi * u2),
                        r * np.sin(2.0 * np.pi * u2)])
    return z[:count]


def gen_probe(n, l_cols, seed):
    """Seeded Gaussian probe matrix, deterministic across platforms."""
    gen = _philox(seed, _V_STREAM)
    return _box_muller(gen, n * l_cols).reshape(n, l_cols)


def tridiag_toeplitz_eig_enclosures(n):
    """Enclosures of the eigenvalues 2 - 2cos(k pi/(n+1)) of tridiag(-1,2,-1)."""
    pi = enclose_pi()
    denom = RInterval.point(float(n + 1))
    two = RInterval(2.0, 2.0)
    out = []
    for k in range(1, n + 1):
        _, c = enclose_sincos(pi * RInterval.point(float(k)) / denom)
        out.append(two - two * c)
    return tuple(out)


def tridiag_matrices(l_exp, seed):
    """Point matrices (A, b_diag) of the harmonic-oscillator family."""
    n = 2 ** l_exp
    a = np.zeros((n, n))
    idx = np.arange(n)
    a[idx, idx] = 2.0
    a[idx[:-1], idx[:-1] + 1] = -1.0
    a[idx[:-1] + 1, idx[:-1]] = -1.0
    gen = _philox(seed, _B_STREAM)
    b = 1.0 + math.sqrt(1e-7) * _box_muller(gen, n)
    return a, b


def tridiag_perturbation_method(n, b_diag):
    """Gap certification data for the tridiag family: analytic eigenvalues
    of A plus |lambda_i(A) - lambda_i| <= |lambda_i(A)| ||I-B||_2 ||B||_2."""
    delta_b = float(np.max(np.abs(b_diag - 1.0)))
    b_norm = float(np.max(np.abs(b_diag)))
    return Perturbation(eig_enclosures=tridiag_toeplitz_eig_enclosures(n),
                        delta_b_sup=delta_b, b_norm_sup=b_norm)


def gen_tridiag(l_exp, seed):
    """Harmonic-oscillator pencil: A = tridiag(-1,2,-1), B = diag(b_i) with
    b_i ~ N(1, 1e-7); Omega centered at 2 encloses exactly the four nearest
    eigenvalues (L = M = 2).

    The radius is the certified midpoint between the reach of the 4th and
    the distance of the 5th nearest eigenvalue from gamma = 2, with the
    perturbation slack folded into both sides.
    """
    if not 5 <= l_exp <= 16:
        raise ConfigError("size exponent must be in [5, 16]")
    n = 2 ** l_exp
    a_mat, b_diag = tridiag_matrices(l_exp, seed)
    method = tridiag_perturbation_method(n, b_diag)
    slack = RInterval.point(method.delta_b_sup) * RInterval.point(method.b_norm_sup)

    gamma = RInterval(2.0, 2.0)
    reach = []
    for lam in method.eig_enclosures:
        pert = (abs(lam) * slack).sup
        dist = abs(lam - gamma)
        reach.append((dist.mid(), (dist + RInterval.point(pert)).sup,
                      (dist - RInterval.point(pert)).inf))
    reach.sort(key=lambda t: t[0])
    inside_reach = max(t[1] for t in reach[:4])
    outside_min = min(t[2] for t in reach[4:])
    if not inside_reach < outside_min:
        raise ConfigError(
            "perturbation slack too large to separate the four target eigenvalues")
    rho = 0.5 * (inside_reach + outside_min)

    v = gen_probe(n, 2, seed)
    return ProblemSpec(
        A=IMatrix.from_point(a_mat, tag="real-symmetric"),
        B=IMatrix.from_point(np.diag(b_diag), tag="real-symmetric"),
        a=2.0 - rho, b=2.0 + rho, m=4, L=2, M=2, V=v, delta=1e-15)


def gen_pentadiag(b100, seed=0):
    """Pentadiagonal Toeplitz pencil A = pentadiag(1,2,3,2,1) with
    B = diag(1,...,1,b100); six eigenvalues in [0.95, 1.05] (L=3, M=2)."""
    if not (b100 == 0.0 or 1e-16 <= b100 <= 1.0):
        raise ConfigError("b100 must be 0 or in [1e-16, 1]")
    n = 100
    a = np.zeros((n, n))
    idx = np.arange(n)
    a[idx, idx] = 3.0
    a[idx[:-1], idx[:-1] + 1] = 2.0
    a[idx[:-1] + 1, idx[:-1]] = 2.0
    a[idx[:-2], idx[:-2] + 2] = 1.0
    a[idx[:-2] + 2, idx[:-2]] = 1.0
    b = np.ones(n)
    b[-1] = b100
    v = gen_probe(n, 3, seed)
    return ProblemSpec(
        A=IMatrix.from_point(a, tag="real-symmetric"),
        B=IMatrix.from_point(np.diag(b), tag="real-symmetric"),
        a=0.95, b=1.05, m=6, L=3, M=2, V=v, delta=1e-15,
        r_bound=n - 1 if b100 == 0.0 else n)


# ---------------------------------------------------------------------------
# Matrix Market (dense-destination) I/O


def load_matrix_market(path):
    """Dense point matrix from a Matrix Market file (coordinate or array,
    real/integer/complex, general/symmetric/hermitian/skew-symmetric)."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline()
        parts = header.strip().split()
        if (len(parts) != 5 or parts[0] != "%%MatrixMarket"
                or parts[1].lower() != "matrix"):
            raise ConfigError(f"malformed MatrixMarket header: {header.strip()!r}")
        fmt, fld, sym = (p.lower() for p in parts[2:5])
        if fmt not in ("coordinate", "array"):
            raise ConfigError(f"unsupported format {fmt!r}")
        if fld not in ("real", "integer", "complex"):
            raise ConfigError(f"unsupported field {fld!r}")
        if sym not in ("general", "symmetric", "hermitian", "skew-symmetric"):
            raise ConfigError(f"unsupported symmetry {sym!r}")
        lines = [ln.strip() for ln in fh
                 if ln.strip() and not ln.lstrip().startswith("%")]
    if not lines:
        raise ConfigError("missing size line")
    dtype = complex if fld == "complex" else float
    try:
        if fmt == "coordinate":
            size = lines[0].split()
            rows, cols, nnz = int(size[0]), int(size[1]), int(size[2])
            if len(lines) - 1 != nnz:
                raise ConfigError(
                    f"entry count {len(lines) - 1} does not match header nnz {nnz}")
            out = np.zeros((rows, cols), dtype=dtype)
            for ln in lines[1:]:
                toks = ln.split()
                i, j = int(toks[0]) - 1, int(toks[1]) - 1
                if not (0 <= i < rows and 0 <= j < cols):
                    raise ConfigError(f"index out of bounds in line {ln!r}")
                val = _mm_value(toks[2:], fld)
                out[i, j] += val
                if sym != "general" and i != j:
                    if sym == "symmetric":
                        out[j, i] += val
                    elif sym == "hermitian":
                        out[j, i] += np.conj(val)
                    else:
                        out[j, i] += -val
        else:
            size = lines[0].split()
            rows, cols = int(size[0]), int(size[1])
            vals = [_mm_value(ln.split(), fld) for ln in lines[1:]]
            if sym == "general":
                if len(vals) != rows * cols:
                    raise ConfigError("array entry count mismatch")
                out = np.array(vals, dtype=dtype).reshape((cols, rows)).T
            else:
                if len(vals) != rows * (rows + 1) // 2:
                    raise ConfigError("array entry count mismatch")
                out = np.zeros((rows, cols), dtype=dtype)
                it = iter(vals)
                for j in range(cols):
                    for i in range(j, rows):
                        val = next(it)
                        out[i, j] = val
                        if i != j:
                            if sym == "symmetric":
                                out[j, i] = val
                            elif sym == "hermitian":
                                out[j, i] = np.conj(val)
                            else:
                                out[j, i] = -val
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"malformed MatrixMarket body: {exc}") from exc
    return out


def _mm_value(toks, fld):
    if fld == "complex":
        return complex(float(toks[0]), float(toks[1]))
    return float(toks[0])


def write_matrix_market(path, arr):
    """Dense array-format writer with shortest-roundtrip decimal entries."""
    arr = np.asarray(arr)
    fld = "complex" if np.iscomplexobj(arr) else "real"
    rows, cols = arr.shape
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"%%MatrixMarket matrix array {fld} general\n")
        fh.write(f"{rows} {cols}\n")
        for j in range(cols):
            for i in range(rows):
                v = arr[i, j]
                if fld == "complex":
                    fh.write(f"{float(v.real)!r} {float(v.imag)!r}\n")
                else:
                    fh.write(f"{float(v)!r}\n")
