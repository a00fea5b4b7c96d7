"""Exact linear algebra over Q for coordinate vectors of word expansions."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from ._kernels import PRIME, rank_mod_p


def integer_row(vec: Sequence) -> list[int]:
    """Scale a rational vector by the lcm of its denominators."""
    den = 1
    for c in vec:
        c = Fraction(c)
        if c:
            den = lcm(den, c.denominator)
    return [int(Fraction(c) * den) for c in vec]


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [list(map(int, r)) for r in rows if any(r)]
    if not m:
        return 0
    k, n = len(m), len(m[0])
    prev = 1
    rank = 0
    for col in range(n):
        if rank == k:
            break
        piv = next((i for i in range(rank, k) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for i in range(rank + 1, k):
            a = m[i][col]
            row_i = m[i]
            row_r = m[rank]
            # exact division: Sylvester's identity
            m[i] = [(p * row_i[j] - a * row_r[j]) // prev for j in range(n)]
        prev = p
        rank += 1
    return rank


def _modular_matrix(rows: Sequence[Sequence[int]]) -> np.ndarray:
    return np.array([[v % PRIME for v in r] for r in rows], dtype=np.int64)


def exact_rank(vectors: Sequence[Sequence]) -> int:
    """Exact rank over Q of rational vectors.

    A mod-p elimination runs first: rank mod p is a lower bound for the rank
    over Q, so a full modular rank is already a certificate.  Otherwise the
    fraction-free elimination decides.
    """
    rows = [integer_row(v) for v in vectors]
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    r_mod, _ = rank_mod_p(_modular_matrix(rows))
    if r_mod == len(rows):
        return r_mod
    return bareiss_rank(rows)


def in_span(target: Sequence, vectors: Sequence[Sequence]) -> bool:
    return exact_rank(list(vectors) + [target]) == exact_rank(vectors)


class Inconsistent(ValueError):
    pass


class ExactSolver:
    """Solve ``sum_j c_j * columns[j] = v`` exactly for a fixed integer basis.

    ``columns`` are integer vectors of equal length that must be linearly
    independent.  Pivot coordinates are chosen once by modular elimination;
    the corresponding square block is inverted over Q.
    """

    def __init__(self, columns: Sequence[Sequence[int]]):
        self.columns = [list(map(int, c)) for c in columns]
        self.size = len(self.columns)
        if self.size == 0:
            self.pivots = []
            self._inv = []
            return
        rank, piv = rank_mod_p(_modular_matrix(self.columns))
        if rank != self.size:
            # modular rank may drop for an unlucky prime; decide exactly
            if bareiss_rank(self.columns) != self.size:
                raise ValueError("basis vectors are linearly dependent")
            raise ArithmeticError("modular pivot selection failed; choose another prime")
        self.pivots = [int(p) for p in piv]
        block = [[Fraction(self.columns[j][r]) for j in range(self.size)] for r in self.pivots]
        self._inv = _invert(block)

    def solve(self, v: Sequence) -> list[Fraction]:
        v = [Fraction(c) for c in v]
        rhs = [v[r] for r in self.pivots]
        coords = [
            sum((a * b for a, b in zip(row, rhs) if a and b), Fraction(0)) for row in self._inv
        ]
        for r in range(len(v)):
            acc = sum(
                (c * self.columns[j][r] for j, c in enumerate(coords) if c and self.columns[j][r]),
                Fraction(0),
            )
            if acc != v[r]:
                raise Inconsistent(f"coordinate {r}: reconstructed {acc}, expected {v[r]}")
        return coords


def _invert(a: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(a)
    m = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next(i for i in range(col, n) if m[i][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        pr = m[col]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y if y else x for x, y in zip(m[i], pr)]
    return [row[n:] for row in m]
