import random
from fractions import Fraction as F

import pytest

import freelip as fl
from freelip.choquet import TauValidationError, min_move_gap
from freelip.corpus import (
    random_element,
    random_measure_below,
    random_positive_measure,
    random_space,
)
from freelip.deleeuw import pair_edge_measure
from freelip.freespace import point_function


def _nu(half):
    return fl.DeLeeuwMeasure(half, {(2, 1): F(1, 2), (1, 0): F(1, 2)})


def _constant_one(space):
    return fl.EdgeFunction(space, {p: F(1) for p in space.pairs})


def test_cone_contains_constant_one(line3, concave3):
    for space in (line3, concave3):
        assert fl.in_cone_G(_constant_one(space)) == (True, None)


def test_cone_contains_quotient_tables():
    rng = random.Random(3)
    for _ in range(10):
        space = random_space(rng, rng.randint(2, 5))
        f = point_function(
            space,
            [0] + [F(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(space.n - 1)],
        )
        assert fl.in_cone_G(fl.phi(f)) == (True, None)


def test_cone_rejects_negative_constant_on_concave(concave3):
    g = fl.EdgeFunction(concave3, {p: F(-1) for p in concave3.pairs})
    ok, witness = fl.in_cone_G(g)
    assert not ok and witness is not None
    x, u, y = witness
    # the witness triple really does violate the defining inequality
    assert concave3.d(x, y) * g[(x, y)] > concave3.d(x, u) * g[(x, u)] + concave3.d(
        u, y
    ) * g[(u, y)]


def test_tau_constant_profile(line3):
    distances = {line3.d(x, y) for x, y in line3.pairs}
    g = fl.tau_edge_function(line3, {t: F(1) for t in distances})
    assert g == _constant_one(line3)


def test_tau_reciprocal_profile(line3, half, concave3):
    for space in (line3, half, concave3):
        distances = {space.d(x, y) for x, y in space.pairs}
        g = fl.tau_edge_function(space, {t: 1 / (1 + t) for t in distances})
        assert g == fl.g_zero(space)


def test_tau_superadditive_rejected(line3):
    distances = {line3.d(x, y) for x, y in line3.pairs}  # {1, 2}: 1 + 1 = 2 composes
    with pytest.raises(TauValidationError) as err:
        fl.tau_edge_function(line3, {t: t for t in distances})
    assert err.value.witness == (1, 1, 2)


def test_tau_requires_all_distances(line3):
    with pytest.raises(ValueError):
        fl.tau_edge_function(line3, {F(1): F(1)})


def test_tau_monotonicity_witnessed(line3):
    with pytest.raises(TauValidationError) as err:
        fl.tau_edge_function(line3, {F(1): F(3), F(2): F(1)})
    assert err.value.witness == (1, 2)


def test_precedes_interval_example(half):
    result = fl.precedes(fl.dirac(half, (2, 0)), _nu(half))
    assert result.holds
    assert dict(result.certificate.weights) == {(2, 1, 0): F(1)}


def test_precedes_reflexive(half):
    nu = _nu(half)
    result = fl.precedes(nu, nu)
    assert result.holds
    assert dict(result.certificate.weights) == {}


def test_precedes_reverse_fails_with_separator(half):
    result = fl.precedes(_nu(half), fl.dirac(half, (2, 0)))
    assert not result.holds
    g = result.separator
    assert fl.in_cone_G(g) == (True, None)
    assert pair_edge_measure(g, _nu(half)) > pair_edge_measure(g, fl.dirac(half, (2, 0)))


def test_precedes_rejects_signed_input(half):
    signed = fl.DeLeeuwMeasure(half, {(1, 0): F(-1)})
    with pytest.raises(ValueError):
        fl.precedes(signed, _nu(half))
    with pytest.raises(ValueError):
        fl.minimal_below(signed)


def test_certificate_soundness_against_cone_sample(half, line3):
    # when precedes holds, every sampled member of G pairs mu below nu
    rng = random.Random(7)
    for space in (half, line3):
        for _ in range(6):
            nu = random_positive_measure(rng, space)
            mu = random_measure_below(rng, nu)
            result = fl.precedes(mu, nu)
            assert result.holds
            sample = [_constant_one(space), fl.g_zero(space)]
            for _ in range(4):
                f = point_function(
                    space,
                    [0] + [F(rng.randint(-6, 6), 2) for _ in range(space.n - 1)],
                )
                sample.append(fl.phi(f))
            distances = {space.d(x, y) for x, y in space.pairs}
            sample.append(
                fl.tau_edge_function(space, {t: F(2) / (1 + t) for t in distances})
            )
            for g in sample:
                assert pair_edge_measure(g, mu) <= pair_edge_measure(g, nu)


def test_minimal_below_interval_example(half):
    assert fl.minimal_below(_nu(half)) == fl.dirac(half, (2, 0))


def test_minimal_below_dirac_on_concave(concave3):
    for pair in concave3.pairs:
        mu = fl.dirac(concave3, pair, F(5, 3))
        assert fl.minimal_below(mu) == mu


def test_minimal_below_zero(half):
    z = fl.DeLeeuwMeasure(half, {})
    assert fl.minimal_below(z) == z
    assert fl.is_minimal(z)


def test_minimal_below_annihilates_circulations(line3):
    # preserved counterexample: opposite masses cancel through moves whose
    # legs carry no mass of their own, so support-based pruning is unsound
    mu = fl.DeLeeuwMeasure(line3, {(1, 2): F(1), (2, 1): F(1)})
    assert fl.phi_adjoint(mu).is_zero()
    zero = fl.DeLeeuwMeasure(line3, {})
    assert fl.precedes(zero, mu).holds
    assert fl.minimal_below(mu) == zero
    assert not fl.is_minimal(mu)


def test_minimal_below_matches_unrestricted_reference():
    # the optimal-input fast path (tight moves only) against the full program
    from freelip.choquet import _minimise_over_moves, triangle_moves

    rng = random.Random(59)
    for _ in range(20):
        space = random_space(rng, rng.randint(3, 5))
        if rng.random() < 0.5:
            mu = fl.optimal_representation(random_element(rng, space))
        else:
            mu = random_positive_measure(rng, space)
        if mu.is_zero():
            continue
        reference = _minimise_over_moves(mu, triangle_moves(space))
        assert fl.minimal_below(mu) == reference


def test_minimal_below_idempotent_random():
    rng = random.Random(11)
    for _ in range(12):
        space = random_space(rng, rng.randint(2, 5))
        mu = random_positive_measure(rng, space)
        first = fl.minimal_below(mu)
        assert fl.minimal_below(first) == first
        assert fl.is_minimal(first)
        assert fl.precedes(first, mu).holds
        assert fl.phi_adjoint(first) == fl.phi_adjoint(mu)


def test_minimal_below_preserves_optimality():
    rng = random.Random(13)
    for _ in range(10):
        space = random_space(rng, rng.randint(2, 5))
        mu = fl.optimal_representation(random_element(rng, space))
        assert fl.is_optimal(fl.minimal_below(mu))


def test_is_minimal_examples(half):
    assert fl.is_minimal(fl.dirac(half, (2, 0)))
    assert not fl.is_minimal(_nu(half))


def test_mass_monotone_along_order():
    rng = random.Random(17)
    for _ in range(10):
        space = random_space(rng, rng.randint(3, 5))
        nu = random_positive_measure(rng, space)
        mu = random_measure_below(rng, nu)
        assert fl.precedes(mu, nu).holds
        assert mu.total_mass() <= nu.total_mass()


def test_antisymmetry():
    rng = random.Random(19)
    for _ in range(10):
        space = random_space(rng, rng.randint(2, 5))
        mu = random_positive_measure(rng, space)
        nu = random_positive_measure(rng, space)
        if fl.precedes(mu, nu).holds and fl.precedes(nu, mu).holds:
            assert mu == nu
        # and reflexively, always
        assert fl.precedes(mu, mu).holds


def test_move_pairing_strictly_positive(line3, half, concave3):
    for space in (line3, half, concave3):
        gap = min_move_gap(space)
        assert gap is not None and gap > 0


def test_move_gap_none_on_two_points(two_point):
    assert min_move_gap(two_point) is None
    mu = fl.dirac(two_point, (1, 0))
    assert fl.minimal_below(mu) == mu
    assert fl.is_minimal(mu)
    nu = fl.dirac(two_point, (1, 0), F(2))
    assert not fl.precedes(mu, nu).holds  # no moves: only equality relates them
    assert fl.precedes(mu, mu).holds


def test_encodings_agree_on_randoms():
    rng = random.Random(23)
    for _ in range(14):
        space = random_space(rng, rng.randint(2, 5))
        nu = random_positive_measure(rng, space)
        mu = (
            random_measure_below(rng, nu)
            if rng.random() < 0.5
            else random_positive_measure(rng, space)
        )
        assert fl.precedes(mu, nu).holds == fl.precedes_via_cone_lp(mu, nu)


def test_diagonal_decompose_molecule(line3):
    m = fl.molecule(line3, 2, 0)
    part_c, part_d, cert = fl.diagonal_decompose(m)
    assert part_c == m and part_d.is_zero()
    assert cert == fl.dirac(line3, (2, 0))
    assert fl.is_optimal(cert) and fl.is_minimal(cert)


def test_diagonal_decompose_sum(line3):
    m = fl.delta(line3, 1) + fl.delta(line3, 2)
    part_c, part_d, cert = fl.diagonal_decompose(m)
    assert part_c == m and part_d.is_zero()
    assert cert.total_mass() == 3
    assert fl.phi_adjoint(cert) == m
    assert fl.is_optimal(cert) and fl.is_minimal(cert)


def test_diagonal_decompose_zero(line3):
    part_c, part_d, cert = fl.diagonal_decompose(fl.zero(line3))
    assert part_c.is_zero() and part_d.is_zero() and cert.is_zero()
