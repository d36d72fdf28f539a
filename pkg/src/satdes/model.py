"""Two-level factorial runs, effects, and the full orthogonal model matrix.

Runs and effects are both encoded as k-bit masks.  Bit i-1 of a run mask is
the level of factor i (set bit = high level = +1, clear = low = -1); bit i-1
of an effect mask says factor i participates in the interaction.  Mask 0 is
the general mean.  Standard order means ascending mask, which matches binary
counting over the factor levels.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from satdes.exactmat import IntMatrix

MAX_FACTORS = 10


class LabelError(ValueError):
    """A run or effect label fails to parse or validate."""


def _check_k(k: int) -> None:
    if not 1 <= k <= MAX_FACTORS:
        raise LabelError(f"factor count must be in 1..{MAX_FACTORS}, got {k}")


@dataclass(frozen=True, order=True)
class Effect:
    """A factorial effect: the general mean, a main effect, or an interaction."""

    k: int
    mask: int

    def __post_init__(self):
        _check_k(self.k)
        if not 0 <= self.mask < (1 << self.k):
            raise LabelError(f"effect mask {self.mask} out of range for k={self.k}")

    @classmethod
    def from_factors(cls, k: int, factors: "tuple[int, ...] | list[int]") -> "Effect":
        mask = 0
        for f in factors:
            if not 1 <= f <= k:
                raise LabelError(f"factor index {f} out of range 1..{k}")
            mask |= 1 << (f - 1)
        return cls(k, mask)

    @property
    def factors(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in range(self.k) if self.mask >> i & 1)

    @property
    def order(self) -> int:
        return self.mask.bit_count()

    @property
    def is_mean(self) -> bool:
        return self.mask == 0

    @property
    def label(self) -> str:
        if self.mask == 0:
            return "F0"
        if self.k <= 9:
            return "F" + "".join(str(f) for f in self.factors)
        return "F" + ".".join(str(f) for f in self.factors)


@dataclass(frozen=True, order=True)
class Run:
    """A single treatment combination, one level per factor."""

    k: int
    mask: int

    def __post_init__(self):
        _check_k(self.k)
        if not 0 <= self.mask < (1 << self.k):
            raise LabelError(f"run mask {self.mask} out of range for k={self.k}")

    @property
    def label(self) -> str:
        return "".join(str(self.mask >> i & 1) for i in range(self.k))

    def level(self, factor: int) -> int:
        """Coded level of a factor: +1 or -1."""
        if not 1 <= factor <= self.k:
            raise LabelError(f"factor index {factor} out of range 1..{self.k}")
        return 1 if self.mask >> (factor - 1) & 1 else -1


def sign_of(run: Run, effect: Effect) -> int:
    """Entry of the model matrix: the product over the effect's factors of
    the run's coded levels.  +1 or -1; the mean column is all +1."""
    if run.k != effect.k:
        raise LabelError("run and effect come from different factor counts")
    low = effect.mask & ~run.mask
    return -1 if low.bit_count() & 1 else 1


def all_effects(k: int) -> tuple[Effect, ...]:
    _check_k(k)
    return tuple(Effect(k, m) for m in range(1 << k))


def all_runs(k: int) -> tuple[Run, ...]:
    _check_k(k)
    return tuple(Run(k, m) for m in range(1 << k))


def build_model_matrix(k: int) -> IntMatrix:
    """Full 2^k x 2^k sign matrix: rows are runs, columns effects, both in
    standard order.  Row r, column e holds the run-effect sign.  This is a
    (row-permuted) Hadamard matrix of Sylvester type."""
    _check_k(k)
    n = 1 << k
    entries = []
    for r in range(n):
        nr = ~r
        for e in range(n):
            entries.append(-1 if (e & nr).bit_count() & 1 else 1)
    return IntMatrix(n, n, tuple(entries))


_RUN_RE = re.compile(r"^[01]+$")
_EFFECT_RE = re.compile(r"^F(\d+(?:\.\d+)*)$")


def parse_run(text: str, k: int) -> Run:
    """Parse a run label: exactly k characters of 0/1, factor 1 first."""
    _check_k(k)
    if not isinstance(text, str) or not _RUN_RE.match(text or ""):
        raise LabelError(f"run label must be a 0/1 string, got {text!r}")
    if len(text) != k:
        raise LabelError(f"run label {text!r} has {len(text)} characters, expected {k}")
    mask = 0
    for i, ch in enumerate(text):
        if ch == "1":
            mask |= 1 << i
    return Run(k, mask)


def parse_effect(text: str, k: int) -> Effect:
    """Parse an effect label.

    Accepted forms: ``F0`` for the mean; ``F`` followed by distinct factor
    digits such as ``F134`` when k <= 9; ``F`` followed by dot-separated
    indices such as ``F1.3.4`` for any k (the only form that can reach
    factor 10, e.g. ``F1.10``; the bare ``F10`` at k=10 is the main effect
    of factor ten).  Factor order in the input does not matter.
    """
    _check_k(k)
    if not isinstance(text, str) or not text:
        raise LabelError("empty effect label")
    if text == "F0":
        return Effect(k, 0)
    m = _EFFECT_RE.match(text)
    if not m:
        raise LabelError(f"malformed effect label {text!r}")
    body = m.group(1)
    if "." in body:
        parts = [int(p) for p in body.split(".")]
    elif k <= 9:
        parts = [int(ch) for ch in body]
    else:
        parts = [int(body)]
    if any(p < 1 for p in parts):
        raise LabelError(f"factor index 0 not allowed in {text!r}")
    if len(set(parts)) != len(parts):
        raise LabelError(f"duplicate factor in {text!r}")
    return Effect.from_factors(k, parts)


@dataclass(frozen=True)
class ModelSpec:
    """A factorial model split into negligible and non-negligible effects.

    The negligible set is what the experimenter is willing to assume away;
    its complement (always containing the mean) is what a saturated design
    must estimate.  Both tuples are kept in standard order.
    """

    k: int
    negligible: tuple[Effect, ...]
    nonnegligible: tuple[Effect, ...] = field(init=False)

    def __post_init__(self):
        _check_k(self.k)
        masks = [e.mask for e in self.negligible]
        if any(e.k != self.k for e in self.negligible):
            raise LabelError("negligible effect declared for a different k")
        if len(set(masks)) != len(masks):
            raise LabelError("duplicate effect in negligible set")
        if 0 in masks:
            raise ValueError("the general mean F0 can never be declared negligible")
        ordered = tuple(sorted(self.negligible, key=lambda e: e.mask))
        object.__setattr__(self, "negligible", ordered)
        neg = set(masks)
        object.__setattr__(
            self,
            "nonnegligible",
            tuple(Effect(self.k, m) for m in range(1 << self.k) if m not in neg),
        )

    @classmethod
    def from_labels(cls, k: int, labels: "list[str] | tuple[str, ...]") -> "ModelSpec":
        return cls(k, tuple(parse_effect(t, k) for t in labels))

    @property
    def run_count(self) -> int:
        """Number of runs a saturated design keeps (non-negligible count)."""
        return (1 << self.k) - len(self.negligible)

    @property
    def deletion_count(self) -> int:
        return len(self.negligible)
