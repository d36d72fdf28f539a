"""Block partition of the full model matrix induced by a run deletion.

Deleting d runs from the 2^k full factorial, with d effects declared
negligible, splits the full sign matrix into four blocks:

* ``design``                kept runs    x non-negligible effects (n x n)
* ``kept_negligible``       kept runs    x negligible effects     (n x d)
* ``deleted_nonnegligible`` deleted runs x non-negligible effects (d x n)
* ``complement``            deleted runs x negligible effects     (d x d)

The deletion is admissible exactly when the complement block is nonsingular,
and then everything about the saturated design (determinant, inverse,
estimability) can be read off the small d x d complement instead of the
n x n design block.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from satdes.exactmat import (
    IntMatrix,
    RatMatrix,
    det_exact,
    inverse_exact,
)
from satdes.model import ModelSpec, Run, parse_run, sign_of


class InadmissibleDesignError(ValueError):
    """The chosen deletion leaves a singular design: the complement block has
    determinant zero, so the non-negligible effects are not all estimable."""

    def __init__(self, deleted_labels: tuple[str, ...]):
        super().__init__(
            "deletion set {%s} is inadmissible (singular complement block)"
            % ", ".join(deleted_labels)
        )
        self.deleted_labels = deleted_labels


@dataclass(frozen=True)
class Partition:
    """The four blocks for one deletion choice, rows and columns in standard
    (ascending mask) order within each group."""

    spec: ModelSpec
    kept: tuple[Run, ...]
    deleted: tuple[Run, ...]
    design: IntMatrix
    kept_negligible: IntMatrix
    deleted_nonnegligible: IntMatrix
    complement: IntMatrix

    @property
    def total_runs(self) -> int:
        return 1 << self.spec.k

    @property
    def kept_labels(self) -> tuple[str, ...]:
        return tuple(r.label for r in self.kept)

    @property
    def deleted_labels(self) -> tuple[str, ...]:
        return tuple(r.label for r in self.deleted)


@dataclass(frozen=True)
class DetIdentity:
    """Both block determinants plus the power of N linking them:
    |det design| = N^exponent * |det complement| (exponent = N/2 - d may be
    negative, in which case the factor moves to the other side)."""

    det_design: int
    det_complement: int
    exponent: int
    holds: bool


@dataclass(frozen=True)
class ComplementInverse:
    """Inverse of the design block computed through the complement block.

    ``adjusted`` is N * inverse(design), transposed back to run-major form
    as design - kept_negligible @ inv(complement) @ deleted_nonnegligible.
    It is integer whenever det(complement) divides every numerator, which
    happens for many but not all admissible deletions, so it downgrades to
    a rational matrix when needed.
    """

    matrix: RatMatrix
    adjusted: IntMatrix | RatMatrix
    det_complement: int
    run_count: int


def _normalize_deleted(
    spec: ModelSpec, deleted: "Iterable[Run | str | int]"
) -> tuple[Run, ...]:
    runs = []
    for item in deleted:
        if isinstance(item, Run):
            runs.append(item)
        elif isinstance(item, str):
            runs.append(parse_run(item, spec.k))
        else:
            runs.append(Run(spec.k, int(item)))
    masks = [r.mask for r in runs]
    if len(set(masks)) != len(masks):
        raise ValueError("duplicate run in deletion set")
    if any(r.k != spec.k for r in runs):
        raise ValueError("deleted run declared for a different k")
    if len(runs) != spec.deletion_count:
        raise ValueError(
            f"deletion set has {len(runs)} runs but the model declares "
            f"{spec.deletion_count} negligible effects"
        )
    return tuple(sorted(runs, key=lambda r: r.mask))


def make_partition(
    spec: ModelSpec, deleted: "Iterable[Run | str | int]"
) -> Partition:
    """Split the model matrix for the given deletion.  The deletion size must
    equal the number of negligible effects; runs may be given as labels,
    Run objects, or raw level masks."""
    del_runs = _normalize_deleted(spec, deleted)
    del_masks = {r.mask for r in del_runs}
    kept = tuple(Run(spec.k, m) for m in range(1 << spec.k) if m not in del_masks)

    def block(rows: tuple[Run, ...], cols) -> IntMatrix:
        return IntMatrix(
            len(rows),
            len(cols),
            tuple(sign_of(r, e) for r in rows for e in cols),
        )

    return Partition(
        spec=spec,
        kept=kept,
        deleted=del_runs,
        design=block(kept, spec.nonnegligible),
        kept_negligible=block(kept, spec.negligible),
        deleted_nonnegligible=block(del_runs, spec.nonnegligible),
        complement=block(del_runs, spec.negligible),
    )


def verify_det_identity(p: Partition) -> DetIdentity:
    """Compute both block determinants independently and confirm the power
    relation between them.  Holds for every deletion, singular or not."""
    det_d = det_exact(p.design)
    det_c = det_exact(p.complement)
    exponent = (1 << p.spec.k) // 2 - p.spec.deletion_count
    big_n = 1 << p.spec.k
    if exponent >= 0:
        holds = abs(det_d) == big_n**exponent * abs(det_c)
    else:
        holds = abs(det_d) * big_n ** (-exponent) == abs(det_c)
    return DetIdentity(det_d, det_c, exponent, holds)


def abs_det_design(p: Partition, det_complement: int) -> int:
    """|det design| derived from det(complement) through the power relation,
    avoiding the n x n elimination."""
    exponent = (1 << p.spec.k) // 2 - p.spec.deletion_count
    big_n = 1 << p.spec.k
    if exponent >= 0:
        return big_n**exponent * abs(det_complement)
    q, r = divmod(abs(det_complement), big_n ** (-exponent))
    assert r == 0, "determinant power relation violated"
    return q


def _int_matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def scaled_adjusted_design(p: Partition, det_c: int) -> list[list[int]]:
    """det(complement) * (design - E C^-1 V) as integer rows, where E, V, C
    are the other three blocks.  Pure integer arithmetic: C^-1 enters only
    through its adjugate."""
    d = p.spec.deletion_count
    if d == 0:
        return [[det_c * x for x in row] for row in p.design.to_lists()]
    inv_c = inverse_exact(p.complement)
    adj_c = []
    for i in range(d):
        row = []
        for j in range(d):
            f = inv_c.at(i, j) * det_c
            assert f.denominator == 1, "adjugate must be integral"
            row.append(f.numerator)
        adj_c.append(row)
    e_adj = _int_matmul(p.kept_negligible.to_lists(), adj_c)
    eav = _int_matmul(e_adj, p.deleted_nonnegligible.to_lists())
    des = p.design.to_lists()
    n = p.spec.run_count
    return [
        [det_c * des[i][j] - eav[i][j] for j in range(n)] for i in range(n)
    ]


def inverse_via_complement(p: Partition) -> ComplementInverse:
    """Exact inverse of the design block from the d x d complement block.

    inverse(design) = (1/N) (design - E C^-1 V)^T.  Much cheaper than
    inverting the design block directly once d < n, and the route taken by
    all estimation code.  Raises :class:`InadmissibleDesignError` when the
    complement is singular.
    """
    det_c = det_exact(p.complement)
    if det_c == 0:
        raise InadmissibleDesignError(p.deleted_labels)
    scaled = scaled_adjusted_design(p, det_c)
    n = p.spec.run_count
    big_n = 1 << p.spec.k
    denom = big_n * det_c
    inv = RatMatrix(
        n,
        n,
        tuple(Fraction(scaled[j][i], denom) for i in range(n) for j in range(n)),
    )
    adjusted_rat = RatMatrix(
        n,
        n,
        tuple(Fraction(scaled[i][j], det_c) for i in range(n) for j in range(n)),
    )
    adjusted: IntMatrix | RatMatrix
    adjusted = adjusted_rat.to_int() if adjusted_rat.is_integral else adjusted_rat
    return ComplementInverse(
        matrix=inv, adjusted=adjusted, det_complement=det_c, run_count=big_n
    )


def contrast_check(p: Partition, det_c: "int | None" = None) -> bool:
    """Column sums of the adjusted design matrix must be (N, 0, ..., 0):
    the estimator of the mean has weights summing to one, every other
    effect estimator is a contrast.  Integer arithmetic throughout."""
    if det_c is None:
        det_c = det_exact(p.complement)
    if det_c == 0:
        raise InadmissibleDesignError(p.deleted_labels)
    scaled = scaled_adjusted_design(p, det_c)
    n = p.spec.run_count
    big_n = 1 << p.spec.k
    sums = [sum(scaled[i][j] for i in range(n)) for j in range(n)]
    expected = [det_c * big_n] + [0] * (n - 1)
    return sums == expected
