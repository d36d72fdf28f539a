"""Combinatorial layer: admissibility, enumeration, D-optimality, spectrum.

All searching happens on the complement side: a deletion of d runs is judged
through the d x d complement block, never through the n x n design block,
which is the cheaper side whenever d < n.  Determinant scans go through the
kernel backend (compiled or pure); orders beyond the kernel limit fall back
to arbitrary-precision elimination.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from satdes import kernels
from satdes.exactmat import IntMatrix, det_exact
from satdes.model import ModelSpec, Run, parse_run

_METHODS = ("exhaustive", "exchange")


class CapExceededError(RuntimeError):
    """Exhaustive work above the configured subset cap."""

    def __init__(self, total: int, cap: int):
        super().__init__(
            f"{total} deletion sets exceed the cap of {cap}; "
            "use the exchange method or raise the cap / pass force"
        )
        self.total = total
        self.cap = cap


class NoAdmissibleSetError(ValueError):
    """Every deletion set of the required size is singular."""


@dataclass(frozen=True)
class SearchConfig:
    method: str = "exhaustive"
    subset_cap: int = 10**7
    restarts: int = 20
    max_iters: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}")
        if self.subset_cap < 1 or self.restarts < 1 or self.max_iters < 1:
            raise ValueError("caps and iteration counts must be positive")


@dataclass(frozen=True)
class DesignReport:
    """Everything reportable about one deletion choice.  Fields that only
    make sense relative to a finished search (efficiency, optimality,
    certification) stay None on plain admissibility checks."""

    k: int
    n: int
    d: int
    negligible: tuple[str, ...]
    deleted: tuple[str, ...]
    kept: tuple[str, ...]
    admissible: bool
    abs_det_c: int
    abs_det_d: int
    efficiency_ratio: "Fraction | None" = None
    optimal: "bool | None" = None
    method: "str | None" = None
    certified: "bool | None" = None


@dataclass(frozen=True)
class DeterminantClass:
    abs_det_c: int
    count: int
    reports: tuple[DesignReport, ...]


@dataclass(frozen=True)
class EnumerationResult:
    """Deletion sets grouped by |det C|, nonzero classes first in descending
    determinant order with members sorted by their deleted-run labels; the
    singular class keeps a count only."""

    k: int
    d: int
    total: int
    admissible_count: int
    zero_count: int
    max_abs_det_c: int
    classes: tuple[DeterminantClass, ...]

    @property
    def reports(self) -> tuple[DesignReport, ...]:
        return tuple(r for cls in self.classes for r in cls.reports)

    @property
    def class_counts(self) -> "dict[int, int]":
        out = {cls.abs_det_c: cls.count for cls in self.classes}
        if self.zero_count:
            out[0] = self.zero_count
        return out


@dataclass(frozen=True)
class OptimalResult:
    """Best deletion found plus, for certified searches, every tied
    maximizer in deterministic order."""

    best: DesignReport
    optima: tuple[DesignReport, ...]
    certified: bool
    method: str
    searched: int


@dataclass(frozen=True)
class SpectrumResult:
    order: int
    raw: tuple[int, ...]
    normalized: tuple[int, ...]


def _negligible_block(spec: ModelSpec) -> "list[list[int]]":
    """All-runs x negligible-effects sign block in standard order."""
    masks = [e.mask for e in spec.negligible]
    rows = []
    for r in range(1 << spec.k):
        nr = ~r
        rows.append([-1 if (m & nr).bit_count() & 1 else 1 for m in masks])
    return rows


def _abs_det_rows(rows: "list[list[int]]") -> int:
    d = len(rows)
    if d == 0:
        return 1
    if d <= kernels.KERNEL_MAX_ORDER:
        return abs(kernels.det_sign_matrix(np.array(rows, dtype=np.int64)))
    return abs(det_exact(IntMatrix.from_rows(rows)))


def _abs_det_design_from_c(spec: ModelSpec, abs_det_c: int) -> int:
    exponent = (1 << spec.k) // 2 - spec.deletion_count
    big_n = 1 << spec.k
    if exponent >= 0:
        return big_n**exponent * abs_det_c
    q, r = divmod(abs_det_c, big_n ** (-exponent))
    assert r == 0, "determinant power relation violated"
    return q


def _labels(spec: ModelSpec, masks: "tuple[int, ...]") -> tuple[str, ...]:
    return tuple(Run(spec.k, m).label for m in masks)


def _normalize_masks(spec: ModelSpec, deleted: Iterable) -> tuple[int, ...]:
    masks = []
    for item in deleted:
        if isinstance(item, Run):
            if item.k != spec.k:
                raise ValueError("deleted run declared for a different k")
            masks.append(item.mask)
        elif isinstance(item, str):
            masks.append(parse_run(item, spec.k).mask)
        else:
            masks.append(Run(spec.k, int(item)).mask)
    if len(set(masks)) != len(masks):
        raise ValueError("duplicate run in deletion set")
    if len(masks) != spec.deletion_count:
        raise ValueError(
            f"deletion set has {len(masks)} runs but the model declares "
            f"{spec.deletion_count} negligible effects"
        )
    return tuple(sorted(masks))


def _report(
    spec: ModelSpec,
    masks: "tuple[int, ...]",
    abs_det_c: int,
    **extra,
) -> DesignReport:
    deleted = _labels(spec, masks)
    mask_set = set(masks)
    kept = _labels(
        spec, tuple(m for m in range(1 << spec.k) if m not in mask_set)
    )
    return DesignReport(
        k=spec.k,
        n=spec.run_count,
        d=spec.deletion_count,
        negligible=tuple(e.label for e in spec.negligible),
        deleted=deleted,
        kept=kept,
        admissible=abs_det_c > 0,
        abs_det_c=abs_det_c,
        abs_det_d=_abs_det_design_from_c(spec, abs_det_c),
        **extra,
    )


def is_admissible(spec: ModelSpec, deleted: Iterable) -> DesignReport:
    """Classify one deletion set: exact |det C|, |det D| via the power
    relation, admissibility flag.  Search-relative fields stay None."""
    masks = _normalize_masks(spec, deleted)
    block = _negligible_block(spec)
    rows = [block[m] for m in masks]
    return _report(spec, masks, _abs_det_rows(rows))


def _sort_key(report: DesignReport):
    return tuple(sorted(report.deleted))


def enumerate_admissible(
    spec: ModelSpec, config: "SearchConfig | None" = None
) -> EnumerationResult:
    """Evaluate every deletion set of size d exactly and group by |det C|.

    Subsets above the cap abort before any scanning; the cap exists because
    the result materializes one report per admissible set.
    """
    config = config or SearchConfig()
    big_n = 1 << spec.k
    d = spec.deletion_count
    total = math.comb(big_n, d)
    if total > config.subset_cap:
        raise CapExceededError(total, config.subset_cap)
    block = _negligible_block(spec)
    combos = itertools.combinations(range(big_n), d)
    by_value: "dict[int, list[tuple[int, ...]]]" = {}
    zero_count = 0
    if 0 < d <= kernels.KERNEL_MAX_ORDER:
        dets = kernels.subset_abs_dets(np.array(block, dtype=np.int8), d).tolist()
        for i, combo in enumerate(combos):
            v = dets[i]
            if v:
                by_value.setdefault(v, []).append(combo)
            else:
                zero_count += 1
    else:
        for combo in combos:
            v = _abs_det_rows([block[m] for m in combo])
            if v:
                by_value.setdefault(v, []).append(combo)
            else:
                zero_count += 1
    values = sorted(by_value, reverse=True)
    max_c = values[0] if values else 0
    classes = []
    for v in values:
        reports = [
            _report(
                spec,
                combo,
                v,
                efficiency_ratio=Fraction(v, max_c),
                optimal=(v == max_c),
                method="exhaustive",
                certified=True,
            )
            for combo in by_value[v]
        ]
        reports.sort(key=_sort_key)
        classes.append(DeterminantClass(v, len(reports), tuple(reports)))
    if zero_count:
        classes.append(DeterminantClass(0, zero_count, ()))
    return EnumerationResult(
        k=spec.k,
        d=d,
        total=total,
        admissible_count=total - zero_count,
        zero_count=zero_count,
        max_abs_det_c=max_c,
        classes=tuple(classes),
    )


def _exhaustive_optimal(spec: ModelSpec, config: SearchConfig, force: bool):
    big_n = 1 << spec.k
    d = spec.deletion_count
    total = math.comb(big_n, d)
    if total > config.subset_cap and not force:
        raise CapExceededError(total, config.subset_cap)
    block = _negligible_block(spec)
    best = 0
    winners: "list[tuple[int, ...]]" = []
    if 0 < d <= kernels.KERNEL_MAX_ORDER:
        dets = kernels.subset_abs_dets(np.array(block, dtype=np.int8), d)
        best = int(dets.max())
        if best > 0:
            idx = np.flatnonzero(dets == best)
            all_combos = itertools.combinations(range(big_n), d)
            wanted = set(idx.tolist())
            winners = [
                c for i, c in enumerate(all_combos) if i in wanted
            ]
    else:
        for combo in itertools.combinations(range(big_n), d):
            v = _abs_det_rows([block[m] for m in combo])
            if v > best:
                best, winners = v, [combo]
            elif v == best and v > 0:
                winners.append(combo)
    if best == 0:
        raise NoAdmissibleSetError(
            "no deletion set of size %d is admissible for this model" % d
        )
    reports = [
        _report(
            spec,
            combo,
            best,
            efficiency_ratio=Fraction(1),
            optimal=True,
            method="exhaustive",
            certified=True,
        )
        for combo in winners
    ]
    reports.sort(key=_sort_key)
    return OptimalResult(
        best=reports[0],
        optima=tuple(reports),
        certified=True,
        method="exhaustive",
        searched=total,
    )


def _exchange_optimal(spec: ModelSpec, config: SearchConfig):
    big_n = 1 << spec.k
    d = spec.deletion_count
    block = _negligible_block(spec)
    if d == 0:
        only = _report(
            spec, (), 1, optimal=None, method="exchange", certified=False
        )
        return OptimalResult(
            best=only,
            optima=(only,),
            certified=False,
            method="exchange",
            searched=1,
        )
    best_val = 0
    best_masks: "tuple[int, ...] | None" = None
    evaluated = 0
    for restart in range(config.restarts):
        rng = np.random.default_rng(
            np.random.SeedSequence(config.seed, spawn_key=(restart,))
        )
        current = sorted(rng.choice(big_n, size=d, replace=False).tolist())
        cur_val = _abs_det_rows([block[m] for m in current])
        evaluated += 1
        for _ in range(config.max_iters):
            swap_best = cur_val
            swap_pair = None
            in_set = set(current)
            for out_m in current:
                for in_m in range(big_n):
                    if in_m in in_set:
                        continue
                    cand = sorted(m for m in current if m != out_m) + [in_m]
                    cand.sort()
                    v = _abs_det_rows([block[m] for m in cand])
                    evaluated += 1
                    if v > swap_best:
                        swap_best = v
                        swap_pair = (out_m, in_m)
            if swap_pair is None:
                break
            out_m, in_m = swap_pair
            current = sorted([m for m in current if m != out_m] + [in_m])
            cur_val = swap_best
        key = tuple(sorted(_labels(spec, tuple(current))))
        if cur_val > best_val or (
            cur_val == best_val
            and best_masks is not None
            and key < tuple(sorted(_labels(spec, best_masks)))
        ):
            best_val = cur_val
            best_masks = tuple(current)
    if best_val == 0 or best_masks is None:
        raise NoAdmissibleSetError(
            "exchange search found no admissible deletion set; "
            "try more restarts or the exhaustive method"
        )
    report = _report(
        spec,
        best_masks,
        best_val,
        optimal=None,
        method="exchange",
        certified=False,
    )
    return OptimalResult(
        best=report,
        optima=(report,),
        certified=False,
        method="exchange",
        searched=evaluated,
    )


def d_optimal(
    spec: ModelSpec, config: "SearchConfig | None" = None, force: bool = False
) -> OptimalResult:
    """Maximize |det C| over deletion sets.

    Exhaustive mode scans every subset and certifies the optimum, ties
    resolved by sorted deleted-run labels.  Exchange mode runs a seeded
    steepest-ascent single-run-swap heuristic from random starts; its answer
    is a lower bound, never certified.
    """
    config = config or SearchConfig()
    if config.method == "exhaustive":
        return _exhaustive_optimal(spec, config, force)
    return _exchange_optimal(spec, config)


def spectrum(order: int) -> SpectrumResult:
    """Attained |det| values of sign matrices of the given order, raw and
    divided by 2^(order-1)."""
    raw = kernels.spectrum_raw(order)
    scale = 1 << (order - 1)
    normalized = []
    for v in raw.tolist():
        q, r = divmod(v, scale)
        assert r == 0, "attained determinant not divisible by 2^(n-1)"
        normalized.append(q)
    return SpectrumResult(order, tuple(int(v) for v in raw), tuple(normalized))
