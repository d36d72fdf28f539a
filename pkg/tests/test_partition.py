"""Block partition, determinant identity, complement-route inverse."""
import itertools
import random
from fractions import Fraction

import pytest

from satdes.exactmat import IntMatrix, RatMatrix, det_exact, inverse_exact, matmul
from satdes.model import ModelSpec, Run
from satdes.partition import (
    InadmissibleDesignError,
    abs_det_design,
    contrast_check,
    inverse_via_complement,
    make_partition,
    verify_det_identity,
)

FOUR_FACTOR_HIGH_ORDER = ["F123", "F124", "F134", "F234", "F1234"]


def spec_2x4() -> ModelSpec:
    """k=4 model keeping mean, mains and two-factor interactions."""
    return ModelSpec.from_labels(4, FOUR_FACTOR_HIGH_ORDER)


def random_model(rng: random.Random, k: int) -> ModelSpec:
    d = rng.randint(1, (1 << k) - 2)
    masks = rng.sample(range(1, 1 << k), d)
    from satdes.model import Effect

    return ModelSpec(k, tuple(Effect(k, m) for m in masks))


def random_deletion(rng: random.Random, spec: ModelSpec) -> list[str]:
    masks = rng.sample(range(1 << spec.k), spec.deletion_count)
    return [Run(spec.k, m).label for m in masks]


def test_partition_shapes_and_orders():
    spec = spec_2x4()
    p = make_partition(spec, ["1111", "0000", "1100", "1010", "1001"])
    assert p.design.rows == p.design.cols == 11
    assert p.complement.rows == p.complement.cols == 5
    assert p.kept_negligible.rows == 11 and p.kept_negligible.cols == 5
    assert p.deleted_nonnegligible.rows == 5 and p.deleted_nonnegligible.cols == 11
    # rows sort into standard order no matter the input order
    assert p.deleted_labels == ("0000", "1100", "1010", "1001", "1111")
    assert len(p.kept) == 11
    assert all(r.mask not in {q.mask for q in p.deleted} for r in p.kept)


def test_partition_blocks_tile_the_model_matrix():
    rng = random.Random(1234)
    for trial in range(30):
        k = rng.choice((2, 3, 4))
        spec = random_model(rng, k)
        p = make_partition(spec, random_deletion(rng, spec))
        seen = {}
        for block, rows, cols in (
            (p.design, p.kept, spec.nonnegligible),
            (p.kept_negligible, p.kept, spec.negligible),
            (p.deleted_nonnegligible, p.deleted, spec.nonnegligible),
            (p.complement, p.deleted, spec.negligible),
        ):
            for i, r in enumerate(rows):
                for j, e in enumerate(cols):
                    seen[(r.mask, e.mask)] = block.at(i, j)
        assert len(seen) == (1 << k) * (1 << k)


def test_known_singular_five_run_block():
    # deleting {1101,0011,1011,0111,1111} under the high-order-negligible
    # model gives a singular complement: first and last columns coincide
    p = make_partition(spec_2x4(), ["1101", "0011", "1011", "0111", "1111"])
    assert p.complement.to_lists() == [
        [-1, 1, -1, -1, -1],
        [1, 1, -1, -1, 1],
        [-1, -1, 1, -1, -1],
        [-1, -1, -1, 1, -1],
        [1, 1, 1, 1, 1],
    ]
    assert det_exact(p.complement) == 0
    assert det_exact(p.design) == 0


def test_known_maximal_five_run_block():
    p = make_partition(spec_2x4(), ["0000", "1100", "1010", "1001", "0111"])
    assert p.complement.to_lists() == [
        [-1, -1, -1, -1, 1],
        [-1, -1, 1, 1, 1],
        [-1, 1, -1, 1, 1],
        [1, -1, -1, 1, 1],
        [-1, -1, -1, 1, -1],
    ]
    assert det_exact(p.complement) == -48
    assert abs(det_exact(p.design)) == 16**3 * 48


def test_five_run_block_with_all_high_run():
    # swapping 0111 for 1111 in the deletion drops the block determinant
    p = make_partition(spec_2x4(), ["0000", "1100", "1010", "1001", "1111"])
    assert abs(det_exact(p.complement)) == 32
    assert abs(det_exact(p.design)) == 16**3 * 32


def test_det_identity_exhaustive_small():
    spec = ModelSpec.from_labels(3, ["F23", "F123"])
    for pair in itertools.combinations(range(8), 2):
        p = make_partition(spec, [Run(3, m).label for m in pair])
        rep = verify_det_identity(p)
        assert rep.holds
        assert rep.exponent == 2  # 8/2 - 2


def test_det_identity_randomized():
    rng = random.Random(424242)
    for trial in range(60):
        k = rng.choice((2, 3, 4))
        spec = random_model(rng, k)
        p = make_partition(spec, random_deletion(rng, spec))
        rep = verify_det_identity(p)
        assert rep.holds
        assert rep.det_design == det_exact(p.design)
        assert rep.det_complement == det_exact(p.complement)


def test_det_identity_negative_exponent():
    # d > N/2 flips the power to the complement side: k=2, keep only the
    # mean, delete three of four runs
    spec = ModelSpec.from_labels(2, ["F1", "F2", "F12"])
    for trio in itertools.combinations(range(4), 3):
        p = make_partition(spec, [Run(2, m).label for m in trio])
        rep = verify_det_identity(p)
        assert rep.exponent == -1
        assert rep.holds
        # every 1x1 design block is +-1, so admissible complements hit the
        # order-3 maximum exactly
        assert abs(rep.det_complement) in (0, 4)


def test_abs_det_design_matches_direct():
    rng = random.Random(77)
    for trial in range(40):
        k = rng.choice((2, 3))
        spec = random_model(rng, k)
        p = make_partition(spec, random_deletion(rng, spec))
        det_c = det_exact(p.complement)
        assert abs_det_design(p, det_c) == abs(det_exact(p.design))


def test_inverse_via_complement_matches_direct():
    rng = random.Random(20240812)
    done = 0
    while done < 40:
        k = rng.choice((2, 3, 4))
        spec = random_model(rng, k)
        p = make_partition(spec, random_deletion(rng, spec))
        if det_exact(p.complement) == 0:
            continue
        ci = inverse_via_complement(p)
        assert ci.matrix == inverse_exact(p.design)
        assert ci.run_count == 1 << k
        done += 1


def test_inverse_via_complement_rejects_singular():
    p = make_partition(spec_2x4(), ["1101", "0011", "1011", "0111", "1111"])
    with pytest.raises(InadmissibleDesignError) as exc:
        inverse_via_complement(p)
    assert "1101" in str(exc.value)
    assert exc.value.deleted_labels == ("1101", "0011", "1011", "0111", "1111")


def test_adjusted_integer_branch():
    p = make_partition(spec_2x4(), ["0000", "1100", "1010", "1001", "1111"])
    ci = inverse_via_complement(p)
    assert isinstance(ci.adjusted, IntMatrix)
    # adjusted is N * inverse transposed back to block orientation
    n = p.spec.run_count
    for i in range(n):
        for j in range(n):
            assert Fraction(ci.adjusted.at(i, j), 16) == ci.matrix.at(j, i)


def test_adjusted_rational_branch():
    # the maximal-determinant deletion needs denominators beyond N
    p = make_partition(spec_2x4(), ["0000", "1100", "1010", "1001", "0111"])
    ci = inverse_via_complement(p)
    assert isinstance(ci.adjusted, RatMatrix)
    assert not ci.adjusted.is_integral
    denoms = {x.denominator for x in ci.adjusted.entries}
    assert 3 in denoms


def test_inverse_via_complement_empty_deletion():
    spec = ModelSpec.from_labels(2, [])
    p = make_partition(spec, [])
    ci = inverse_via_complement(p)
    assert ci.det_complement == 1
    assert ci.matrix == inverse_exact(p.design)
    # full factorial: inverse is transpose over N
    h = p.design
    assert ci.matrix == RatMatrix.from_rows(
        [[Fraction(h.at(j, i), 4) for j in range(4)] for i in range(4)]
    )


def test_contrast_check_admissible_cases():
    rng = random.Random(5150)
    done = 0
    while done < 30:
        k = rng.choice((2, 3, 4))
        spec = random_model(rng, k)
        p = make_partition(spec, random_deletion(rng, spec))
        if det_exact(p.complement) == 0:
            continue
        assert contrast_check(p)
        done += 1


def test_contrast_check_row_sums_of_inverse():
    p = make_partition(spec_2x4(), ["0000", "1100", "1010", "1001", "0111"])
    inv = inverse_via_complement(p).matrix
    sums = [sum(inv.to_lists()[i]) for i in range(11)]
    assert sums[0] == 1
    assert all(s == 0 for s in sums[1:])


def test_contrast_check_singular_raises():
    p = make_partition(spec_2x4(), ["1101", "0011", "1011", "0111", "1111"])
    with pytest.raises(InadmissibleDesignError):
        contrast_check(p)


def test_deletion_validation():
    spec = spec_2x4()
    with pytest.raises(ValueError):
        make_partition(spec, ["0000", "1100"])  # wrong size
    with pytest.raises(ValueError):
        make_partition(spec, ["0000", "0000", "1100", "1010", "1001"])


def test_gram_of_design_equals_product_form():
    # design^T design agrees with matmul of the stored blocks, a coherence
    # check that block extraction and matmul share conventions
    spec = ModelSpec.from_labels(3, ["F123"])
    p = make_partition(spec, ["010"])
    g = matmul(p.design.transpose(), p.design)
    assert g.rows == g.cols == 7
    assert all(g.at(i, i) == 7 for i in range(7))
