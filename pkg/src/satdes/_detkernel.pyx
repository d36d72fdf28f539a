# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled determinant-scan kernels.

Same contract as the pure fallback: exact |det| values over small sign
matrices via int64 Bareiss elimination.  Intermediate Bareiss entries are
minors of the input, so for +-1 matrices through order 16 everything fits
in 64 bits with a wide margin; the wrappers enforce that domain.
"""
import math

import numpy as np

BACKEND_NAME = "compiled"

cdef long long _bareiss(long long* a, int n) nogil:
    """Destructive fraction-free elimination on an n*n row-major buffer."""
    cdef int p, i, j, r, found
    cdef long long app, aip, prev, tmp, sign
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for p in range(n - 1):
        if a[p * n + p] == 0:
            found = 0
            for r in range(p + 1, n):
                if a[r * n + p] != 0:
                    for j in range(n):
                        tmp = a[p * n + j]
                        a[p * n + j] = a[r * n + j]
                        a[r * n + j] = tmp
                    sign = -sign
                    found = 1
                    break
            if not found:
                return 0
        app = a[p * n + p]
        for i in range(p + 1, n):
            aip = a[i * n + p]
            for j in range(p + 1, n):
                a[i * n + j] = (app * a[i * n + j] - aip * a[p * n + j]) // prev
            a[i * n + p] = 0
        prev = app
    if sign > 0:
        return a[(n - 1) * n + (n - 1)]
    return -a[(n - 1) * n + (n - 1)]


def det_pm1(long long[:, ::1] mat):
    """Exact determinant of one square sign matrix, order <= 16."""
    cdef int n = mat.shape[0]
    cdef long long buf[256]
    cdef int i, j
    if mat.shape[1] != n:
        raise ValueError("square matrix required")
    if n > 16:
        raise ValueError("compiled kernel handles orders up to 16")
    for i in range(n):
        for j in range(n):
            buf[i * n + j] = mat[i, j]
    return int(_bareiss(buf, n))


def subset_abs_dets(signed char[:, ::1] block, int d):
    """|det| of every d-row submatrix of block (N x d), lexicographic order
    of row-index subsets, as an int64 array of length C(N, d)."""
    cdef int big_n = block.shape[0]
    cdef long long total
    cdef long long buf[256]
    cdef int idx[16]
    cdef int i, j, t, pos
    cdef long long det
    if block.shape[1] != d:
        raise ValueError("block column count must equal subset size")
    if d > 16:
        raise ValueError("compiled kernel handles orders up to 16")
    if d > big_n:
        raise ValueError("subset size exceeds row count")
    total = math.comb(big_n, d)
    out = np.empty(total, dtype=np.int64)
    cdef long long[::1] ov = out
    for i in range(d):
        idx[i] = i
    for t in range(total):
        for i in range(d):
            pos = idx[i]
            for j in range(d):
                buf[i * d + j] = block[pos, j]
        det = _bareiss(buf, d)
        ov[t] = det if det >= 0 else -det
        # advance to the next lexicographic subset
        i = d - 1
        while i >= 0 and idx[i] == big_n - d + i:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        for j in range(i + 1, d):
            idx[j] = idx[j - 1] + 1
    return out


def spectrum_raw(int n):
    """All attained |det| values over +-1 matrices of order n, by normalized
    enumeration (first row and column fixed +1) with the last row expanded
    through its cofactors.  Sorted int64 array."""
    cdef long long rows[16][16]
    cdef long long minor[256]
    cdef long long cof[16]
    cdef long long top_bits, last_bits, b, total, tops, lasts
    cdef int i, j, c, cc, free_cols, top_rows
    cdef long long det, bound
    if n < 1:
        raise ValueError("order must be positive")
    if n == 1:
        return np.array([1], dtype=np.int64)
    if n > 6:
        raise ValueError("spectrum enumeration supported through order 6")
    free_cols = n - 1
    top_rows = n - 1
    # Hadamard bound: |det| <= n^(n/2) <= 6^3 = 216 for every order here
    bound = 216
    flags = np.zeros(bound + 1, dtype=np.uint8)
    cdef unsigned char[::1] fv = flags
    tops = 1 << (free_cols * (top_rows - 1))
    lasts = 1 << free_cols
    for j in range(n):
        rows[0][j] = 1
    for top_bits in range(tops):
        b = top_bits
        for i in range(1, top_rows):
            rows[i][0] = 1
            for j in range(1, n):
                rows[i][j] = 1 if b & 1 else -1
                b >>= 1
        for c in range(n):
            for i in range(top_rows):
                cc = 0
                for j in range(n):
                    if j != c:
                        minor[i * (n - 1) + cc] = rows[i][j]
                        cc += 1
            det = _bareiss(minor, n - 1)
            if (n - 1 + c) % 2 == 0:
                cof[c] = det
            else:
                cof[c] = -det
        for last_bits in range(lasts):
            total = cof[0]
            b = last_bits
            for j in range(1, n):
                if b & 1:
                    total += cof[j]
                else:
                    total -= cof[j]
                b >>= 1
            if total < 0:
                total = -total
            fv[total] = 1
    return np.flatnonzero(flags).astype(np.int64)
