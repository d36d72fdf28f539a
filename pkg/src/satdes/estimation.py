"""Estimation on a saturated design: BLUE, BLUP, dispersion, efficiency.

With kept-run observations Y1 and the partition blocks D, E, V, C, the best
linear unbiased estimator of the non-negligible effects is
theta_hat = inverse(D) Y1 = (1/N)(D - E C^-1 V)^T Y1, the unobserved
responses are predicted by -(C^-1)^T E^T Y1, and the estimator covariance
is sigma^2 inverse(D) inverse(D)^T.  Everything is exact rational when the
observations are; a seeded Monte Carlo harness validates the distributional
claims numerically.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from satdes.exactmat import RatMatrix, det_exact, inverse_exact
from satdes.partition import (
    InadmissibleDesignError,
    Partition,
    abs_det_design,
    inverse_via_complement,
    scaled_adjusted_design,
)


class ObservationError(ValueError):
    """Observation data does not match the design's kept runs."""


@dataclass(frozen=True)
class ObservationVector:
    """Responses for the kept runs, in the partition's kept-run order."""

    values: tuple[Fraction, ...]

    @classmethod
    def coerce(cls, values: Iterable) -> "ObservationVector":
        return cls(tuple(Fraction(v) for v in values))

    def __len__(self) -> int:
        return len(self.values)


@dataclass
class EstimationResult:
    """Exact estimates, predictions and dispersion for one design."""

    theta1_hat: "dict[str, Fraction]"
    y2_blup: "dict[str, Fraction]"
    dispersion: RatMatrix
    det_complement: int
    abs_det_design: int


@dataclass(frozen=True)
class EfficiencyResult:
    """Determinant ratio against the best design, with the conventional
    per-parameter reading ratio^(1/d)."""

    ratio: Fraction
    order: int

    @property
    def per_parameter(self) -> float:
        if self.order == 0:
            return 1.0
        return float(self.ratio) ** (1.0 / self.order)


@dataclass
class SimulationSummary:
    """Monte Carlo check of unbiasedness and covariance."""

    effects: tuple[str, ...]
    bias: np.ndarray
    empirical_cov: np.ndarray
    theoretical_cov: np.ndarray
    reps: int
    sigma: float
    seed: int


def _check_observations(p: Partition, y) -> ObservationVector:
    # tolerate plain sequences of ints/floats/strings built by hand
    if not isinstance(y, ObservationVector):
        y = ObservationVector.coerce(y)
    else:
        y = ObservationVector.coerce(y.values)
    n = p.spec.run_count
    if len(y) != n:
        raise ObservationError(
            f"observation vector has {len(y)} entries, design keeps {n} runs"
        )
    return y


def _exact_theta_hat(p: Partition, y: ObservationVector, det_c: int) -> list[Fraction]:
    """(1/N)(D - E C^-1 V)^T y through the integer-scaled adjusted matrix."""
    scaled = scaled_adjusted_design(p, det_c)
    n = p.spec.run_count
    denom = (1 << p.spec.k) * det_c
    return [
        sum(scaled[j][i] * y.values[j] for j in range(n)) / Fraction(denom)
        for i in range(n)
    ]


def blup_unobserved(p: Partition, y: ObservationVector) -> "dict[str, Fraction]":
    """Predict the deleted-run responses: -(C^-1)^T E^T Y1."""
    y = _check_observations(p, y)
    det_c = det_exact(p.complement)
    if det_c == 0:
        raise InadmissibleDesignError(p.deleted_labels)
    d = p.spec.deletion_count
    n = p.spec.run_count
    e_block = p.kept_negligible
    ety = [
        sum(e_block.at(r, j) * y.values[r] for r in range(n)) for j in range(d)
    ]
    inv_c = inverse_exact(p.complement)
    preds = [
        -sum(inv_c.at(j, i) * ety[j] for j in range(d)) for i in range(d)
    ]
    return {run.label: Fraction(v) for run, v in zip(p.deleted, preds)}


def dispersion(p: Partition) -> RatMatrix:
    """Estimator covariance in units of sigma^2: inverse(D) inverse(D)^T,
    evaluated as (1/N^2)(D-EC^-1V)^T (D-EC^-1V) on the integer-scaled
    matrix so only one rational division happens per entry."""
    det_c = det_exact(p.complement)
    if det_c == 0:
        raise InadmissibleDesignError(p.deleted_labels)
    scaled = scaled_adjusted_design(p, det_c)
    n = p.spec.run_count
    denom = ((1 << p.spec.k) * det_c) ** 2
    entries = []
    for i in range(n):
        for j in range(n):
            g = sum(scaled[t][i] * scaled[t][j] for t in range(n))
            entries.append(Fraction(g, denom))
    return RatMatrix(n, n, tuple(entries))


def blue(p: Partition, y: ObservationVector) -> EstimationResult:
    """Full estimation pass: BLUE of the non-negligible effects, BLUP of the
    unobserved runs, dispersion, and both determinants."""
    y = _check_observations(p, y)
    det_c = det_exact(p.complement)
    if det_c == 0:
        raise InadmissibleDesignError(p.deleted_labels)
    theta = _exact_theta_hat(p, y, det_c)
    labels = [e.label for e in p.spec.nonnegligible]
    return EstimationResult(
        theta1_hat=dict(zip(labels, theta)),
        y2_blup=blup_unobserved(p, y),
        dispersion=dispersion(p),
        det_complement=det_c,
        abs_det_design=abs_det_design(p, det_c),
    )


def relative_efficiency(det_c: int, det_c_max: int, d: int) -> EfficiencyResult:
    """Determinant ratio |det_c|/|det_c_max| with per-parameter rendering
    ratio^(1/d).  The reference determinant must be nonzero."""
    if det_c_max == 0:
        raise ValueError("reference determinant is zero: no admissible design")
    if d < 0:
        raise ValueError("negative deletion order")
    return EfficiencyResult(Fraction(abs(det_c), abs(det_c_max)), d)


def simulate(
    p: Partition,
    theta1: Sequence,
    sigma: float,
    reps: int,
    seed: int,
) -> SimulationSummary:
    """Replicate Y1 = D theta1 + eps with iid Gaussian noise and re-estimate.

    Each replicate draws from its own counter-derived stream, so results do
    not depend on how replicates might be chunked across workers, only on
    the seed.  sigma = 0 short-circuits through the exact estimator and
    reports identically zero bias and covariance.
    """
    if reps < 1:
        raise ValueError("reps must be positive")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    ci = inverse_via_complement(p)
    n = p.spec.run_count
    theta = [Fraction(v) for v in theta1]
    if len(theta) != n:
        raise ValueError(f"theta1 needs {n} components, got {len(theta)}")
    labels = tuple(e.label for e in p.spec.nonnegligible)
    disp = dispersion(p)
    theo = (sigma**2) * np.array(
        [[float(disp.at(i, j)) for j in range(n)] for i in range(n)]
    )
    if sigma == 0:
        y = ObservationVector.coerce(
            [
                sum(p.design.at(i, j) * theta[j] for j in range(n))
                for i in range(n)
            ]
        )
        est = blue(p, y)
        recovered = [est.theta1_hat[lab] for lab in labels]
        assert recovered == theta, "exact noiseless recovery failed"
        zeros = np.zeros(n)
        return SimulationSummary(
            labels, zeros, np.zeros((n, n)), theo, reps, 0.0, seed
        )
    d_mat = np.array(p.design.to_lists(), dtype=float)
    inv_mat = np.array(
        [[float(ci.matrix.at(i, j)) for j in range(n)] for i in range(n)]
    )
    mean_y = d_mat @ np.array([float(v) for v in theta])
    estimates = np.empty((reps, n))
    for rep in range(reps):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(rep,)))
        y = mean_y + sigma * rng.standard_normal(n)
        estimates[rep] = inv_mat @ y
    bias = estimates.mean(axis=0) - np.array([float(v) for v in theta])
    # np.cov collapses to a 0-d array when n == 1; keep the matrix shape.
    emp_cov = np.atleast_2d(np.cov(estimates, rowvar=False, ddof=1))
    return SimulationSummary(labels, bias, emp_cov, theo, reps, float(sigma), seed)


def read_observations(path, p: Partition) -> ObservationVector:
    """Load kept-run responses from a CSV with header ``run,y``.

    Rows may appear in any order but must cover exactly the kept runs.
    Values parse as exact rationals: integers, decimals, or p/q strings.
    """
    seen: "dict[str, Fraction]" = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != [
            "run",
            "y",
        ]:
            raise ObservationError(
                f"expected header 'run,y', got {reader.fieldnames}"
            )
        for line in reader:
            label = (line["run"] or "").strip()
            raw = (line["y"] or "").strip()
            if label in seen:
                raise ObservationError(f"duplicate observation for run {label}")
            try:
                seen[label] = Fraction(raw)
            except (ValueError, ZeroDivisionError) as exc:
                raise ObservationError(
                    f"cannot parse response {raw!r} for run {label}"
                ) from exc
    kept = p.kept_labels
    missing = [lab for lab in kept if lab not in seen]
    extra = [lab for lab in seen if lab not in kept]
    if missing or extra:
        parts = []
        if missing:
            parts.append("missing runs: " + ", ".join(missing))
        if extra:
            parts.append("unexpected runs: " + ", ".join(extra))
        raise ObservationError("; ".join(parts))
    return ObservationVector(tuple(seen[lab] for lab in kept))
