"""Seeded random instances and the randomized property battery.

Everything is driven by a caller-supplied ``random.Random``, so whole runs
are reproducible bit for bit from one integer seed.  Generated distance
tables use small denominators and are repaired to exact metrics by
shortest-path completion, which also plants plenty of betweenness ties;
concave spaces are drawn with all distances strictly inside (1, 2), where
every triangle inequality is automatically strict.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from . import choquet, deleeuw, extremality, freespace, metricspace
from .choquet import minimal_below, precedes, precedes_via_cone_lp, triangle_moves
from .deleeuw import DeLeeuwMeasure, phi_adjoint, restrict
from .freespace import FreeElement, free_norm, norm_value, support
from .metricspace import Dilation, FiniteMetricSpace, metric_repair, validate


def random_space(rng: random.Random, n: int) -> FiniteMetricSpace:
    """A validated metric space on n points with small rational distances."""
    labels = [str(i) for i in range(n)]
    raw = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            value = Fraction(rng.randint(1, 24), rng.randint(1, 6))
            raw[i][j] = raw[j][i] = value
    repaired = metric_repair(raw)
    return validate(labels, repaired)


def random_concave_space(rng: random.Random, n: int) -> FiniteMetricSpace:
    """A space whose triangle inequalities are all strict (distances in (1, 2))."""
    labels = [str(i) for i in range(n)]
    raw = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            den = rng.randint(8, 24)
            num = rng.randint(den + 1, 2 * den - 1)
            raw[i][j] = raw[j][i] = Fraction(num, den)
    space = validate(labels, raw)
    concave, _ = metricspace.is_concave(space)
    assert concave
    return space


def random_element(rng: random.Random, space: FiniteMetricSpace) -> FreeElement:
    coeffs = tuple(
        Fraction(rng.randint(-30, 30), rng.randint(1, 6)) for _ in range(space.n - 1)
    )
    return FreeElement(space, coeffs)


def random_positive_measure(
    rng: random.Random, space: FiniteMetricSpace, density: float = 0.5
) -> DeLeeuwMeasure:
    masses = {}
    for p in space.pairs:
        if rng.random() < density:
            masses[p] = Fraction(rng.randint(1, 12), rng.randint(1, 4))
    return DeLeeuwMeasure(space, masses)


def random_measure_below(
    rng: random.Random, nu: DeLeeuwMeasure, steps: int = 3
) -> DeLeeuwMeasure:
    """Apply random triangle moves downward from nu, staying nonnegative."""
    space = nu.space
    moves = triangle_moves(space)
    current = dict(nu.masses)
    if not moves:
        return nu
    for _ in range(steps):
        move = moves[rng.randrange(len(moves))]
        entries = move.entries(space)
        # largest feasible step keeps the positive-entry pairs nonnegative
        cap: Optional[Fraction] = None
        for p, v in entries.items():
            if v > 0:
                room = current.get(p, Fraction(0)) / v
                cap = room if cap is None else min(cap, room)
        if cap is None or cap <= 0:
            continue
        step = cap * Fraction(rng.randint(1, 4), 4)
        for p, v in entries.items():
            current[p] = current.get(p, Fraction(0)) - step * v
    return DeLeeuwMeasure(space, current)


def random_pair_subset(rng: random.Random, space: FiniteMetricSpace) -> frozenset:
    return frozenset(p for p in space.pairs if rng.random() < 0.5)


def random_partition(rng: random.Random, space: FiniteMetricSpace, blocks: int):
    parts = [set() for _ in range(blocks)]
    for p in space.pairs:
        parts[rng.randrange(blocks)].add(p)
    return parts


def scaled_relabeled_copy(rng: random.Random, space: FiniteMetricSpace):
    """A copy of the space with metric scaled by a random c and points shuffled.

    Returns (copy, planted dilation from the source onto the copy).
    """
    n = space.n
    c = Fraction(rng.randint(1, 8), rng.randint(1, 8))
    perm = list(range(n))
    rng.shuffle(perm)
    dist = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            dist[perm[i]][perm[j]] = c * space.d(i, j)
    copy = validate([str(i) for i in range(n)], dist)
    return copy, Dilation(factor=c, mapping=tuple(perm))


# ---------------------------------------------------------------------------
# property checks shared by the CLI battery and the acceptance suite


def check_extremality_agreement(space: FiniteMetricSpace):
    """Betweenness verdicts versus the hull oracle on every ordered pair."""
    mismatches = []
    extreme_count = 0
    for (x, y) in space.pairs:
        by_criterion = extremality.classify_molecule(space, x, y, witness=False).extreme
        by_oracle = extremality.vertex_oracle(space, x, y)
        if by_criterion != by_oracle:
            mismatches.append((x, y))
        elif by_criterion:
            extreme_count += 1
    return mismatches, extreme_count


def check_norm_duality(m: FreeElement) -> bool:
    """Both norm programs agree and both witnesses verify exactly."""
    result = free_norm(m)
    if deleeuw.phi_adjoint(result.measure) != m:
        return False
    if result.measure.total_mass() != result.value:
        return False
    if not result.measure.is_positive():
        return False
    if freespace.pairing(result.function, m) != result.value:
        return False
    lip, _ = freespace.lipschitz_norm(result.function)
    if lip > 1:
        return False
    if result.value != 0 and lip != 1:
        return False
    return True


def check_restriction_additivity(
    mu: DeLeeuwMeasure, subset: frozenset
) -> bool:
    """Norms of the two restriction halves of an optimal measure add exactly."""
    inside = restrict(mu, subset)
    outside = restrict(mu, set(mu.space.pairs) - set(subset))
    total = norm_value(phi_adjoint(mu))
    return (
        norm_value(phi_adjoint(inside)) + norm_value(phi_adjoint(outside)) == total
    )


def check_choquet_encodings(mu: DeLeeuwMeasure, nu: DeLeeuwMeasure) -> bool:
    """Triangle-move verdict equals the direct cone-program verdict."""
    return precedes(mu, nu).holds == precedes_via_cone_lp(mu, nu)


def check_antisymmetry(mu: DeLeeuwMeasure, nu: DeLeeuwMeasure) -> bool:
    forward = precedes(mu, nu).holds
    backward = precedes(nu, mu).holds
    if forward and backward:
        return mu == nu
    return True


def check_mass_monotone(mu: DeLeeuwMeasure, nu: DeLeeuwMeasure) -> bool:
    if precedes(mu, nu).holds:
        return mu.total_mass() <= nu.total_mass()
    return True


def check_minimality(mu: DeLeeuwMeasure) -> bool:
    """minimal_below is idempotent (hence minimal) and preserves optimality."""
    first = minimal_below(mu)
    if minimal_below(first) != first:  # also says is_minimal(first)
        return False
    if deleeuw.is_optimal(mu) and not deleeuw.is_optimal(first):
        return False
    return True


def check_move_strictness(space: FiniteMetricSpace) -> bool:
    gap = choquet.min_move_gap(space)
    return gap is None or gap > 0


def check_decomposition(m: FreeElement, parts) -> bool:
    pieces = deleeuw.decompose(m, parts)
    total = freespace.zero(m.space)
    for piece in pieces:
        total = total + piece
    if total != m:
        return False
    if sum((norm_value(p) for p in pieces), Fraction(0)) != norm_value(m):
        return False
    allowed = support(m) | {0}
    return all(support(piece) <= allowed for piece in pieces)


def check_convex_integral(m: FreeElement) -> bool:
    terms = deleeuw.convex_integral(m)
    rebuilt = freespace.zero(m.space)
    for w, pair in terms:
        if w < 0:
            return False
        rebuilt = rebuilt + freespace.molecule(m.space, *pair).scaled(w)
    return rebuilt == m and sum((w for w, _ in terms), Fraction(0)) == norm_value(m)


def check_diagonal_decomposition(m: FreeElement) -> bool:
    part_c, part_d, certificate = choquet.diagonal_decompose(m)
    if part_c != m or not part_d.is_zero():
        return False
    return deleeuw.is_optimal(certificate) and choquet.is_minimal(certificate)


def check_planted_dilation(space, copy, planted: Dilation) -> bool:
    dilations = metricspace.find_dilations(space, copy)
    if planted not in dilations:
        return False
    report = extremality.verify_banach_stone(space, copy, planted)
    return report.ok


# ---------------------------------------------------------------------------
# the battery behind ``freelip corpus``


def run_battery(max_points: int, count: int, seed: int) -> dict:
    """Run the randomized property battery over ``count`` generated spaces.

    Returns a JSON-ready report; reproducible bit for bit from the seed.
    """
    if max_points < 2:
        raise ValueError("max_points must be at least 2")
    rng = random.Random(seed)
    checks = {
        name: {"pass": 0, "fail": 0}
        for name in (
            "extremality_agreement",
            "extreme_set_nonempty",
            "norm_duality",
            "restriction_additivity",
            "choquet_encodings",
            "antisymmetry",
            "mass_monotone",
            "minimality",
            "move_strictness",
            "decomposition",
            "convex_integral",
            "diagonal_decomposition",
            "planted_dilation",
        )
    }
    failures = []

    def record(name: str, ok: bool, index: int, detail: str = "") -> None:
        checks[name]["pass" if ok else "fail"] += 1
        if not ok:
            failures.append({"check": name, "space": index, "detail": detail})

    for index in range(count):
        n = rng.randint(2, max_points)
        space = random_space(rng, n)
        mismatches, extreme_count = check_extremality_agreement(space)
        record(
            "extremality_agreement",
            not mismatches,
            index,
            f"pairs {mismatches}" if mismatches else "",
        )
        record("extreme_set_nonempty", extreme_count > 0, index)
        record("move_strictness", check_move_strictness(space), index)

        m = random_element(rng, space)
        record("norm_duality", check_norm_duality(m), index)
        mu_opt = deleeuw.optimal_representation(m)
        record(
            "restriction_additivity",
            check_restriction_additivity(mu_opt, random_pair_subset(rng, space)),
            index,
        )
        record("decomposition", check_decomposition(m, random_partition(rng, space, 2)), index)
        record("convex_integral", check_convex_integral(m), index)
        record("diagonal_decomposition", check_diagonal_decomposition(m), index)

        nu = random_positive_measure(rng, space)
        mu = random_measure_below(rng, nu) if rng.random() < 0.5 else random_positive_measure(rng, space)
        record("choquet_encodings", check_choquet_encodings(mu, nu), index)
        record("antisymmetry", check_antisymmetry(mu, nu), index)
        record("mass_monotone", check_mass_monotone(mu, nu), index)
        record("minimality", check_minimality(nu), index)

        if n >= 3:
            concave = random_concave_space(rng, min(n, 5))
            copy, planted = scaled_relabeled_copy(rng, concave)
            record("planted_dilation", check_planted_dilation(concave, copy, planted), index)

    ok = all(v["fail"] == 0 for v in checks.values())
    return {
        "params": {"max_points": max_points, "count": count, "seed": seed},
        "checks": checks,
        "failures": failures,
        "ok": ok,
    }
