"""Rank and determinant kernels.

``bareiss_rank`` / ``bareiss_det`` are exact over the integers (Python ints,
fraction-free). ``batch_rank_modp`` ranks a whole stack of matrices at once
over F_p with numpy; p < 2^31 so products of residues fit in int64.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import List, Sequence

import numpy as np

PRIME = 2_147_483_647  # 2^31 - 1


def integer_rows(rows: Sequence[Sequence]) -> List[List[int]]:
    """Scale each row of a rational matrix to integers (rank-preserving)."""
    out = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        den = lcm(*(x.denominator for x in fr)) if fr else 1
        out.append([int(x * den) for x in fr])
    return out


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    m = [list(map(int, r)) for r in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][c]
        for i in range(rank + 1, nrows):
            mi = m[i]
            f = mi[c]
            row = m[rank]
            for j in range(c + 1, ncols):
                mi[j] = (p * mi[j] - f * row[j]) // prev
            mi[c] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    m = [list(map(int, r)) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    if any(len(r) != n for r in m):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for c in range(n - 1):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        p = m[c][c]
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = (p * m[i][j] - m[i][c] * m[c][j]) // prev
            m[i][c] = 0
        prev = p
    return sign * m[n - 1][n - 1]


def rational_rank(rows: Sequence[Sequence]) -> int:
    return bareiss_rank(integer_rows(rows))


def batch_rank_modp(stack: np.ndarray, p: int = PRIME) -> np.ndarray:
    """Ranks over F_p of each matrix in a (B, R, C) integer stack."""
    if p >= 1 << 31:
        raise ValueError("prime must be below 2^31 for int64 products")
    m = np.array(stack, dtype=np.int64) % p
    if m.shape[1] < m.shape[2]:
        m = np.ascontiguousarray(m.transpose(0, 2, 1))  # loop over the shorter side
    bsz, nrows, ncols = m.shape
    rank = np.zeros(bsz, dtype=np.int64)
    rows_idx = np.arange(nrows)
    batch_idx = np.arange(bsz)
    for c in range(ncols):
        if nrows == 0:
            break
        cand = (m[:, :, c] != 0) & (rows_idx[None, :] >= rank[:, None])
        found = cand.any(axis=1)
        if not found.any():
            continue
        piv = np.argmax(cand, axis=1)
        r = np.minimum(rank, nrows - 1)
        # swap pivot row into position r (a no-op where nothing was found)
        pr = np.where(found, piv, r)
        row_r = m[batch_idx, r, :].copy()
        m[batch_idx, r, :] = m[batch_idx, pr, :]
        m[batch_idx, pr, :] = row_r
        pivot_row = m[batch_idx, r, :]
        # fraction-free step: row_i <- piv * row_i - f_i * row_r (no inverses)
        below = (rows_idx[None, :] > r[:, None]) & found[:, None]
        f = np.where(below, m[:, :, c], 0)
        scale = np.where(below, pivot_row[:, c][:, None], 1)
        # both products are below 2^62, so their difference fits in int64
        m = (m * scale[:, :, None] - f[:, :, None] * pivot_row[:, None, :]) % p
        rank += found
        if rank.min() == nrows:
            break
    return rank
