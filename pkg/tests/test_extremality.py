import random
from fractions import Fraction as F

import pytest

import freelip as fl
from freelip.corpus import (
    check_planted_dilation,
    random_concave_space,
    random_space,
    scaled_relabeled_copy,
)
from freelip.extremality import NotExtremeError, apply_linear_map
from freelip.freespace import distance_function
from freelip.metricspace import Dilation


def test_line_outer_pair_is_split(line3):
    verdict = fl.classify_molecule(line3, 2, 0)
    assert not verdict.extreme
    assert verdict.between == 1
    d = line3.d
    # the split identity the witness encodes, checked exactly
    lhs = fl.molecule(line3, 2, 0)
    rhs = fl.molecule(line3, 2, 1).scaled(d(2, 1) / d(2, 0)) + fl.molecule(
        line3, 1, 0
    ).scaled(d(1, 0) / d(2, 0))
    assert lhs == rhs


def test_line_short_pairs_are_extreme(line3):
    for pair in [(1, 0), (0, 1), (2, 1), (1, 2)]:
        verdict = fl.classify_molecule(line3, *pair)
        assert verdict.extreme
        assert verdict.margin > 0


def test_concave_space_all_extreme(concave3):
    verdicts = fl.extreme_points(concave3)
    assert len(verdicts) == 6 and all(v.extreme for v in verdicts)


def test_classification_is_symmetric():
    rng = random.Random(3)
    for _ in range(10):
        space = random_space(rng, rng.randint(2, 6))
        for x, y in space.pairs:
            a = fl.classify_molecule(space, x, y, witness=False).extreme
            b = fl.classify_molecule(space, y, x, witness=False).extreme
            assert a == b


def test_vertex_oracle_examples(line3, two_point):
    assert not fl.vertex_oracle(line3, 2, 0)
    assert fl.vertex_oracle(line3, 2, 1)
    assert fl.vertex_oracle(two_point, 1, 0)


def test_oracle_agrees_with_criterion():
    rng = random.Random(5)
    for _ in range(12):
        space = random_space(rng, rng.randint(2, 6))
        for x, y in space.pairs:
            assert (
                fl.classify_molecule(space, x, y, witness=False).extreme
                == fl.vertex_oracle(space, x, y)
            )


def test_extreme_points_line_set(line3):
    verdicts = fl.extreme_points(line3, witness=False)
    extreme = {v.pair for v in verdicts if v.extreme}
    assert extreme == {(1, 0), (0, 1), (2, 1), (1, 2)}


def test_extreme_points_single_point_rejected(one_point):
    with pytest.raises(ValueError):
        fl.extreme_points(one_point)


def test_extreme_points_never_empty():
    rng = random.Random(7)
    for _ in range(12):
        space = random_space(rng, rng.randint(2, 6))
        assert any(v.extreme for v in fl.extreme_points(space, witness=False))


def test_concavity_matches_full_extremality():
    rng = random.Random(9)
    for _ in range(10):
        space = random_space(rng, rng.randint(2, 5))
        all_extreme = all(v.extreme for v in fl.extreme_points(space, witness=False))
        assert all_extreme == fl.is_concave(space)[0]


def test_exposing_two_point(two_point):
    f, margin = fl.exposing_functional(two_point, 1, 0)
    assert margin == 2
    assert f.values == distance_function(two_point, 0).values


def test_exposing_line(line3):
    f, margin = fl.exposing_functional(line3, 2, 1)
    assert margin > 0
    assert fl.pairing(f, fl.molecule(line3, 2, 1)) == 1
    assert fl.lipschitz_norm(f)[0] == 1
    others = [
        fl.pairing(f, fl.molecule(line3, u, v))
        for (u, v) in line3.pairs
        if (u, v) != (2, 1)
    ]
    assert max(others) == 1 - margin


def test_exposing_rejects_split_pair(line3):
    with pytest.raises(NotExtremeError):
        fl.exposing_functional(line3, 2, 0)


def test_exposing_margins_on_concave(concave3):
    for x, y in concave3.pairs:
        _, margin = fl.exposing_functional(concave3, x, y)
        assert margin > 0


# ---------------------------------------------------------------------------
# dilation-induced isometries


def test_banach_stone_identity(line3):
    identity = Dilation(factor=F(1), mapping=(0, 1, 2))
    report = fl.verify_banach_stone(line3, line3, identity)
    assert report.ok
    # identity matrix on coefficients
    assert report.matrix == ((F(1), F(0)), (F(0), F(1)))


def test_banach_stone_scaled_line(line3):
    target = fl.validate(["0", "3", "6"], [[0, 3, 6], [3, 0, 3], [6, 3, 0]])
    dil = Dilation(factor=F(3), mapping=(0, 1, 2))
    report = fl.verify_banach_stone(line3, target, dil)
    assert report.ok
    for (x, y) in line3.pairs:
        image = apply_linear_map(report.matrix, fl.molecule(line3, x, y), target)
        assert image == fl.molecule(target, x, y)


def test_banach_stone_rejects_non_dilation(line3, concave3):
    with pytest.raises(ValueError):
        fl.verify_banach_stone(line3, concave3, Dilation(factor=F(1), mapping=(0, 1, 2)))


def test_banach_stone_base_moving_copy(concave3):
    rng = random.Random(11)
    copy, planted = scaled_relabeled_copy(rng, concave3)
    found = fl.find_dilations(concave3, copy)
    assert planted in found
    report = fl.verify_banach_stone(concave3, copy, planted)
    assert report.ok


def test_planted_dilations_random():
    rng = random.Random(13)
    for _ in range(8):
        space = random_concave_space(rng, rng.randint(3, 5))
        copy, planted = scaled_relabeled_copy(rng, space)
        assert check_planted_dilation(space, copy, planted)
