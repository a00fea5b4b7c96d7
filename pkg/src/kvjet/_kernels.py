"""Integer kernels for the free-Lie-algebra layer.

Two hot loops live here:

* ``bracket_dense``: expansion of a Lie bracket ``[a, b] = ab - ba`` of two
  homogeneous integer word vectors (index = binary word code, x=0, y=1).
* ``rank_mod_p``: Gaussian elimination over GF(p), used to pick pivot rows
  and to certify full rank (rank mod p never exceeds the rank over Q).

Both have a numba ``@njit`` version and a vectorized numpy version.  Set
``KVJET_DISABLE_NUMBA=1`` to force the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

PRIME = 2147483647  # 2**31 - 1; products of residues fit in int64

_disabled = os.environ.get("KVJET_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError("numba disabled by KVJET_DISABLE_NUMBA")
    import numba

    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# numpy reference path


def bracket_dense_numpy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # concatenation of words of lengths p, q is code_a * 2**q + code_b,
    # which is exactly the row-major flattening of the outer product
    return np.outer(a, b).ravel() - np.outer(b, a).ravel()


def rank_mod_p_numpy(mat: np.ndarray, p: int = PRIME):
    """Row-reduce ``mat`` (k vectors x n coordinates) mod p.

    Returns ``(rank, pivot_columns)``; ``pivot_columns[i]`` is the coordinate
    used to eliminate the i-th independent vector.
    """
    m = np.array(mat, dtype=np.int64) % p
    k, n = m.shape
    pivots = []
    row = 0
    for col in range(n):
        if row == k:
            break
        nz = np.nonzero(m[row:, col])[0]
        if nz.size == 0:
            continue
        r = row + nz[0]
        if r != row:
            m[[row, r]] = m[[r, row]]
        inv = pow(int(m[row, col]), p - 2, p)
        m[row] = (m[row] * inv) % p
        others = np.nonzero(m[:, col])[0]
        others = others[others != row]
        if others.size:
            f = m[others, col][:, None]
            m[others] = (m[others] - (f * m[row][None, :]) % p) % p
        pivots.append(col)
        row += 1
    return row, np.array(pivots, dtype=np.int64)


# ---------------------------------------------------------------------------
# numba path

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _bracket_dense_nb(a, b):
        na = a.shape[0]
        nb_ = b.shape[0]
        out = np.zeros(na * nb_, dtype=np.int64)
        for i in range(na):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(nb_):
                out[i * nb_ + j] += ai * b[j]
        for j in range(nb_):
            bj = b[j]
            if bj == 0:
                continue
            for i in range(na):
                out[j * na + i] -= bj * a[i]
        return out

    @numba.njit(cache=True)
    def _powmod(base, exp, p):
        result = 1
        base = base % p
        while exp > 0:
            if exp & 1:
                result = (result * base) % p
            base = (base * base) % p
            exp >>= 1
        return result

    @numba.njit(cache=True)
    def _rank_mod_p_nb(mat, p):
        m = mat.copy()
        k, n = m.shape
        for i in range(k):
            for j in range(n):
                m[i, j] = m[i, j] % p
                if m[i, j] < 0:
                    m[i, j] += p
        pivots = np.empty(min(k, n), dtype=np.int64)
        row = 0
        for col in range(n):
            if row == k:
                break
            r = -1
            for i in range(row, k):
                if m[i, col] != 0:
                    r = i
                    break
            if r < 0:
                continue
            if r != row:
                for j in range(n):
                    tmp = m[row, j]
                    m[row, j] = m[r, j]
                    m[r, j] = tmp
            inv = _powmod(m[row, col], p - 2, p)
            for j in range(col, n):
                m[row, j] = (m[row, j] * inv) % p
            for i in range(k):
                if i == row:
                    continue
                f = m[i, col]
                if f == 0:
                    continue
                for j in range(col, n):
                    m[i, j] = (m[i, j] - f * m[row, j]) % p
            pivots[row] = col
            row += 1
        return row, pivots[:row]


def bracket_dense(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    if HAVE_NUMBA:
        return _bracket_dense_nb(a, b)
    return bracket_dense_numpy(a, b)


def rank_mod_p(mat: np.ndarray, p: int = PRIME):
    mat = np.ascontiguousarray(mat, dtype=np.int64)
    if mat.size == 0:
        return 0, np.zeros(0, dtype=np.int64)
    if HAVE_NUMBA:
        r, piv = _rank_mod_p_nb(mat, p)
        return int(r), piv
    return rank_mod_p_numpy(mat, p)


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
