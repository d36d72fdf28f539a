"""Tests for admissibility checks, exhaustive enumeration, D-optimal search
and the sign-matrix determinant spectrum.

Expected censuses were frozen from independent exact evaluation (rational
elimination over every subset) before the search layer existed.
"""
import itertools
from fractions import Fraction

import pytest

from satdes.exactmat import det_exact
from satdes.model import ModelSpec, Run
from satdes.partition import make_partition
from satdes.search import (
    CapExceededError,
    NoAdmissibleSetError,
    SearchConfig,
    d_optimal,
    enumerate_admissible,
    is_admissible,
    spectrum,
)

# the sixteen deletable pairs for k=3 with F23 and F123 negligible; exactly
# the pairs whose factor-1 levels differ
DELETABLE_PAIRS = {
    frozenset(p)
    for p in [
        ("000", "100"),
        ("000", "110"),
        ("000", "101"),
        ("000", "111"),
        ("100", "010"),
        ("100", "001"),
        ("100", "011"),
        ("010", "110"),
        ("010", "101"),
        ("010", "111"),
        ("110", "001"),
        ("110", "011"),
        ("001", "101"),
        ("001", "111"),
        ("101", "011"),
        ("011", "111"),
    ]
}

# quadruple deletions for k=3 keeping only the mean and main effects
DELETABLE_QUADRUPLES = [
    ("000", "100", "010", "001"),
    ("000", "100", "110", "111"),
    ("000", "010", "110", "111"),
    ("000", "001", "101", "111"),
]

FOLD_OVER_NEGLIGIBLE = ["F123", "F124", "F134", "F234", "F1234"]


def test_single_negligible_every_run_deletable():
    spec = ModelSpec.from_labels(3, ["F123"])
    result = enumerate_admissible(spec)
    assert result.total == 8
    assert result.admissible_count == 8
    assert result.zero_count == 0
    assert result.class_counts == {1: 8}
    for report in result.reports:
        assert report.admissible
        assert report.abs_det_c == 1
        assert report.abs_det_d == 8**3


def test_pair_deletion_census_matches_frozen_list():
    spec = ModelSpec.from_labels(3, ["F23", "F123"])
    result = enumerate_admissible(spec)
    assert result.total == 28
    assert result.admissible_count == 16
    assert result.zero_count == 12
    assert result.max_abs_det_c == 2
    got = {frozenset(r.deleted) for r in result.reports}
    assert got == DELETABLE_PAIRS
    for report in result.reports:
        assert report.abs_det_c == 2
        assert report.abs_det_d == 128


def test_pair_deletion_rule_factor_one_levels_differ():
    # the census above is exactly the pairs of runs disagreeing in factor 1
    for pair in DELETABLE_PAIRS:
        a, b = sorted(pair)
        assert a[0] != b[0]


def test_quadruple_deletion_census():
    spec = ModelSpec.from_labels(3, ["F12", "F13", "F23", "F123"])
    result = enumerate_admissible(spec)
    assert result.total == 70
    assert result.class_counts == {16: 2, 8: 56, 0: 12}
    admissible = {frozenset(r.deleted) for r in result.reports}
    for quad in DELETABLE_QUADRUPLES:
        assert frozenset(quad) in admissible


def test_quadruple_complement_of_half_replicate_is_deletable():
    # direct exact evaluation: this four-run set has |det C| = 8, so its
    # complement is a usable saturated design
    spec = ModelSpec.from_labels(3, ["F12", "F13", "F23", "F123"])
    report = is_admissible(spec, ["110", "101", "011", "111"])
    assert report.admissible
    assert report.abs_det_c == 8
    assert report.abs_det_d == 8


def test_fold_over_census_and_classes():
    spec = ModelSpec.from_labels(4, FOLD_OVER_NEGLIGIBLE)
    result = enumerate_admissible(spec)
    assert result.total == 4368
    assert result.admissible_count == 3008
    assert result.zero_count == 1360
    assert result.class_counts == {48: 16, 32: 320, 16: 2672, 0: 1360}
    assert [cls.abs_det_c for cls in result.classes] == [48, 32, 16, 0]
    zero_class = result.classes[-1]
    assert zero_class.count == 1360 and zero_class.reports == ()


def test_enumeration_reports_carry_search_fields():
    spec = ModelSpec.from_labels(4, FOLD_OVER_NEGLIGIBLE)
    result = enumerate_admissible(spec)
    for report in result.reports:
        assert report.method == "exhaustive"
        assert report.certified is True
        assert report.efficiency_ratio == Fraction(report.abs_det_c, 48)
        assert report.optimal == (report.abs_det_c == 48)


def test_enumeration_is_deterministic():
    spec = ModelSpec.from_labels(4, FOLD_OVER_NEGLIGIBLE)
    a = enumerate_admissible(spec)
    b = enumerate_admissible(spec)
    assert a == b


def test_optimal_exhaustive_fold_over_model():
    spec = ModelSpec.from_labels(4, FOLD_OVER_NEGLIGIBLE)
    result = d_optimal(spec)
    assert result.certified is True
    assert result.method == "exhaustive"
    assert result.searched == 4368
    assert len(result.optima) == 16
    assert result.best is result.optima[0]
    assert result.best.deleted == ("0000", "1110", "1001", "0101", "0011")
    assert result.best.abs_det_c == 48
    assert result.best.abs_det_d == 16**3 * 48 == 196608
    assert result.best.efficiency_ratio == 1
    for rep in result.optima:
        assert rep.abs_det_c == 48 and rep.optimal and rep.certified
    # deterministic tie-break: sorted by deleted-run labels
    keys = [tuple(sorted(r.deleted)) for r in result.optima]
    assert keys == sorted(keys)


def test_optimal_matches_enumeration_max():
    cases = [
        (3, ["F123"]),
        (3, ["F23", "F123"]),
        (3, ["F12", "F13", "F23", "F123"]),
        (4, FOLD_OVER_NEGLIGIBLE),
        (4, ["F1234"]),
    ]
    for k, labels in cases:
        spec = ModelSpec.from_labels(k, labels)
        best = d_optimal(spec).best
        census = enumerate_admissible(spec)
        assert best.abs_det_c == census.max_abs_det_c, (k, labels)


def test_exchange_heuristic_never_beats_certified_optimum():
    spec = ModelSpec.from_labels(4, FOLD_OVER_NEGLIGIBLE)
    exact = d_optimal(spec).best.abs_det_c
    for seed in range(5):
        config = SearchConfig(method="exchange", restarts=5, seed=seed)
        result = d_optimal(spec, config)
        assert result.certified is False
        assert result.method == "exchange"
        assert result.best.abs_det_c <= exact
        assert result.best.optimal is None
        assert result.best.admissible


def test_exchange_reaches_the_optimum_here():
    spec = ModelSpec.from_labels(4, FOLD_OVER_NEGLIGIBLE)
    config = SearchConfig(method="exchange", restarts=20, seed=0)
    assert d_optimal(spec, config).best.abs_det_c == 48


def test_exchange_is_deterministic_given_seed():
    spec = ModelSpec.from_labels(4, FOLD_OVER_NEGLIGIBLE)
    config = SearchConfig(method="exchange", restarts=8, seed=123)
    a = d_optimal(spec, config)
    b = d_optimal(spec, config)
    assert a.best == b.best
    assert a.searched == b.searched


def test_admissibility_iff_design_block_nonsingular():
    # duality: the complement block is nonsingular exactly when the kept-run
    # design block is
    for labels in (["F123"], ["F23", "F123"], ["F12", "F13", "F23", "F123"]):
        spec = ModelSpec.from_labels(3, labels)
        d = spec.deletion_count
        for combo in itertools.combinations(range(8), d):
            report = is_admissible(spec, combo)
            p = make_partition(spec, combo)
            det_d = det_exact(p.design)
            assert report.admissible == (det_d != 0)
            assert report.abs_det_d == abs(det_d)


def test_power_relation_on_every_enumerated_report():
    for k, labels in ((3, ["F23", "F123"]), (4, FOLD_OVER_NEGLIGIBLE)):
        spec = ModelSpec.from_labels(k, labels)
        big_n = 1 << k
        exponent = big_n // 2 - spec.deletion_count
        for report in enumerate_admissible(spec).reports:
            assert report.abs_det_d == big_n**exponent * report.abs_det_c


def test_negative_exponent_power_relation():
    # n < N/2: deleting three of the four runs of a 2^2 experiment
    spec = ModelSpec.from_labels(2, ["F1", "F2", "F12"])
    result = enumerate_admissible(spec)
    assert result.total == 4
    for report in result.reports:
        assert report.abs_det_c == 4 * report.abs_det_d
        assert report.abs_det_d == 1


def test_enumerated_determinants_lie_in_spectrum():
    cases = [
        (3, ["F123"]),
        (3, ["F23", "F123"]),
        (3, ["F12", "F13", "F23", "F123"]),
        (4, FOLD_OVER_NEGLIGIBLE),
    ]
    for k, labels in cases:
        spec = ModelSpec.from_labels(k, labels)
        attainable = set(spectrum(spec.deletion_count).raw)
        census = enumerate_admissible(spec)
        for value in census.class_counts:
            assert value in attainable, (k, labels, value)


def test_spectrum_small_orders():
    assert spectrum(1).raw == (1,)
    assert spectrum(1).normalized == (1,)
    assert spectrum(2).raw == (0, 2)
    assert spectrum(2).normalized == (0, 1)
    assert spectrum(4).raw == (0, 8, 16)
    assert spectrum(4).normalized == (0, 1, 2)
    five = spectrum(5)
    assert five.raw == (0, 16, 32, 48)
    assert five.normalized == (0, 1, 2, 3)


def test_is_admissible_accepts_runs_labels_and_masks():
    spec = ModelSpec.from_labels(3, ["F23", "F123"])
    by_label = is_admissible(spec, ["000", "100"])
    by_run = is_admissible(spec, [Run(3, 0), Run(3, 1)])
    by_mask = is_admissible(spec, [0, 1])
    assert by_label == by_run == by_mask
    assert by_label.deleted == ("000", "100")


def test_normalization_rejects_bad_deletions():
    spec = ModelSpec.from_labels(3, ["F23", "F123"])
    with pytest.raises(ValueError):
        is_admissible(spec, ["000"])  # wrong size
    with pytest.raises(ValueError):
        is_admissible(spec, ["000", "000"])  # duplicate
    with pytest.raises(ValueError):
        is_admissible(spec, [Run(4, 0), Run(4, 1)])  # wrong k


def test_subset_cap_guards_enumeration_and_search():
    spec = ModelSpec.from_labels(4, FOLD_OVER_NEGLIGIBLE)
    small = SearchConfig(subset_cap=100)
    with pytest.raises(CapExceededError) as exc:
        enumerate_admissible(spec, small)
    assert exc.value.total == 4368 and exc.value.cap == 100
    with pytest.raises(CapExceededError):
        d_optimal(spec, small)
    forced = d_optimal(spec, small, force=True)
    assert forced.best.abs_det_c == 48


def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(method="simulated-annealing")
    with pytest.raises(ValueError):
        SearchConfig(subset_cap=0)
    with pytest.raises(ValueError):
        SearchConfig(restarts=0)
    with pytest.raises(ValueError):
        SearchConfig(max_iters=0)


def test_no_admissible_error_is_a_value_error():
    assert issubclass(NoAdmissibleSetError, ValueError)
