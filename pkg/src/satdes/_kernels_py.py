"""Pure-Python fallback for the determinant-scan kernels.

Same contract as the compiled extension: exact results, identical output
arrays, no overflow anywhere (Python integers).  Orders of magnitude slower
on large scans, which only matters for big enumerations and the order-6
spectrum.
"""
from __future__ import annotations

import itertools

import numpy as np

BACKEND_NAME = "pure"


def _bareiss_det(a: list[list[int]], n: int) -> int:
    """Fraction-free elimination on a scratch list-of-lists, destructive."""
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for p in range(n - 1):
        if a[p][p] == 0:
            for r in range(p + 1, n):
                if a[r][p]:
                    a[p], a[r] = a[r], a[p]
                    sign = -sign
                    break
            else:
                return 0
        app = a[p][p]
        row_p = a[p]
        for i in range(p + 1, n):
            row_i = a[i]
            aip = row_i[p]
            for j in range(p + 1, n):
                row_i[j] = (app * row_i[j] - aip * row_p[j]) // prev
            row_i[p] = 0
        prev = app
    return sign * a[n - 1][n - 1]


def det_pm1(mat) -> int:
    """Exact determinant of a small square +-1 matrix (any int matrix works
    here, the compiled twin restricts to sign entries within order 16)."""
    a = [[int(x) for x in row] for row in mat]
    return _bareiss_det(a, len(a))


def subset_abs_dets(block, d: int):
    """|det| of every d-row submatrix of ``block`` (shape (N, d)), subsets
    in lexicographic order by row index.  Returns an int64 array of length
    C(N, d)."""
    rows = [[int(x) for x in row] for row in np.asarray(block)]
    big_n = len(rows)
    out = []
    for combo in itertools.combinations(range(big_n), d):
        scratch = [rows[i][:] for i in combo]
        out.append(abs(_bareiss_det(scratch, d)))
    return np.array(out, dtype=np.int64)


def spectrum_raw(n: int):
    """All attained |det| values over +-1 matrices of order n.

    Enumerates the normal form (first row and first column all +1, a sign
    change of rows/columns reaches it from any matrix without changing
    |det|), expanding the last row through its cofactors so each of the
    2^((n-1)(n-2)) upper parts is eliminated once and reused for all
    2^(n-1) last rows.  Returns a sorted int64 array.
    """
    if n == 1:
        return np.array([1], dtype=np.int64)
    top_rows = n - 1
    free_cols = n - 1
    seen = set()
    for top_bits in range(1 << (free_cols * (top_rows - 1))):
        rows = [[1] * n]
        b = top_bits
        for _ in range(top_rows - 1):
            row = [1]
            for _ in range(free_cols):
                row.append(1 if b & 1 else -1)
                b >>= 1
            rows.append(row)
        cof = []
        for j in range(n):
            minor = [r[:j] + r[j + 1 :] for r in rows]
            s = 1 if (n - 1 + j) % 2 == 0 else -1
            cof.append(s * _bareiss_det(minor, n - 1))
        for last_bits in range(1 << free_cols):
            total = cof[0]
            b = last_bits
            for j in range(1, n):
                total += cof[j] if b & 1 else -cof[j]
                b >>= 1
            seen.add(abs(total))
    return np.array(sorted(seen), dtype=np.int64)
