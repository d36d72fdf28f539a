"""Exact dense linear algebra over arbitrary-precision integers and rationals.

Determinants use Bareiss fraction-free elimination, inverses a fraction-free
Gauss-Jordan sweep followed by a single rational division per entry, so no
rounding happens anywhere.  Matrices are immutable row-major value objects.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class DimensionError(ValueError):
    """Operand shapes do not admit the requested operation."""


class SingularMatrixError(ValueError):
    """Inverse of a matrix whose determinant is exactly zero."""

    def __init__(self, message: str = "matrix is singular", det: int = 0):
        super().__init__(message)
        self.det = det


def _exact_div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise ArithmeticError("inexact division in fraction-free elimination")
    return q


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major, immutable and hashable."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, data: Iterable[Sequence[int]]) -> "IntMatrix":
        lists = [list(row) for row in data]
        nrows = len(lists)
        ncols = len(lists[0]) if lists else 0
        if any(len(row) != ncols for row in lists):
            raise DimensionError("ragged rows")
        flat = tuple(int(x) for row in lists for x in row)
        return cls(nrows, ncols, flat)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def to_lists(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c : (i + 1) * c]) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def to_rat(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, tuple(Fraction(x) for x in self.entries))

    @property
    def is_sign_matrix(self) -> bool:
        return all(x == 1 or x == -1 for x in self.entries)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols


@dataclass(frozen=True)
class RatMatrix:
    """Dense matrix of exact rationals (``fractions.Fraction`` keeps every
    entry reduced with a positive denominator)."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, data: Iterable[Sequence[Fraction | int]]) -> "RatMatrix":
        lists = [list(row) for row in data]
        nrows = len(lists)
        ncols = len(lists[0]) if lists else 0
        if any(len(row) != ncols for row in lists):
            raise DimensionError("ragged rows")
        flat = tuple(Fraction(x) for row in lists for x in row)
        return cls(nrows, ncols, flat)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    def at(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def to_lists(self) -> list[list[Fraction]]:
        c = self.cols
        return [list(self.entries[i * c : (i + 1) * c]) for i in range(self.rows)]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            self.cols,
            self.rows,
            tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)

    def to_int(self) -> IntMatrix:
        if not self.is_integral:
            raise ValueError("matrix has non-integer entries")
        return IntMatrix(self.rows, self.cols, tuple(int(x) for x in self.entries))


Matrix = IntMatrix | RatMatrix


def _require_square(m: Matrix) -> None:
    if not m.rows == m.cols:
        raise DimensionError(f"square matrix required, got {m.rows}x{m.cols}")


def det_exact(m: IntMatrix) -> int:
    """Exact determinant by Bareiss fraction-free elimination.

    The 0x0 determinant is 1 (empty product), which makes the empty-deletion
    edge case work out.  For sign matrices the Hadamard bound
    ``det^2 <= n^n`` is asserted on the result.
    """
    _require_square(m)
    n = m.rows
    if n == 0:
        return 1
    a = m.to_lists()
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
    det = sign * a[n - 1][n - 1]
    if m.is_sign_matrix:
        assert det * det <= n**n, "Hadamard bound violated: elimination bug"
    return det


def inverse_exact(m: IntMatrix) -> RatMatrix:
    """Exact inverse of a nonsingular integer matrix.

    Fraction-free Gauss-Jordan keeps all intermediates integral (each update
    divides exactly by the previous pivot); the only rational arithmetic is
    the final per-entry division by the row's diagonal.  Raises
    :class:`SingularMatrixError` when the determinant is zero.
    """
    _require_square(m)
    n = m.rows
    if n == 0:
        return RatMatrix(0, 0, ())
    a = [
        [*row, *(int(i == j) for j in range(n))]
        for i, row in enumerate(m.to_lists())
    ]
    width = 2 * n
    den = 1
    for col in range(n):
        if a[col][col] == 0:
            for r in range(col + 1, n):
                if a[r][col]:
                    a[col], a[r] = a[r], a[col]
                    break
            else:
                raise SingularMatrixError(det=0)
        piv = a[col][col]
        row_c = a[col]
        for r in range(n):
            if r == col:
                continue
            row_r = a[r]
            f = row_r[col]
            for j in range(width):
                row_r[j] = _exact_div(piv * row_r[j] - f * row_c[j], den)
        den = piv
    # after the sweep the left block is diagonal; inverse row i is the right
    # block row divided by its own diagonal entry
    out = []
    for i in range(n):
        diag = a[i][i]
        out.append([Fraction(a[i][n + j], diag) for j in range(n)])
    return RatMatrix.from_rows(out)


def matmul(a: Matrix, b: Matrix) -> RatMatrix:
    """Exact matrix product, always returned as a rational matrix."""
    if a.cols != b.rows:
        raise DimensionError(
            f"inner dimensions disagree: {a.rows}x{a.cols} times {b.rows}x{b.cols}"
        )
    inner = a.cols
    arows = a.to_lists()
    bcols = b.transpose().to_lists()
    zero = Fraction(0)
    flat = []
    for i in range(a.rows):
        ra = arows[i]
        for j in range(b.cols):
            cb = bcols[j]
            flat.append(sum((ra[t] * cb[t] for t in range(inner)), zero))
    return RatMatrix(a.rows, b.cols, tuple(Fraction(x) for x in flat))
