"""Measures on ordered pairs and the incremental-quotient transform.

At this finite scale the pair set is the whole stage: a measure is a
sparse rational mass table on ordered pairs of distinct points, the
transform turns point functions into their incremental-quotient tables,
and its adjoint turns pair measures back into free-space elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .freespace import FreeElement, PointFunction, norm_value
from .metricspace import FiniteMetricSpace
from .rational import to_fraction

_ZERO = Fraction(0)

Pair = tuple[int, int]


def _check_pair(space: FiniteMetricSpace, pair) -> Pair:
    x, y = pair
    if not (0 <= x < space.n and 0 <= y < space.n):
        raise ValueError(f"pair {pair!r} out of range")
    if x == y:
        raise ValueError(f"pair {pair!r} is on the diagonal")
    return (x, y)


@dataclass(frozen=True)
class EdgeFunction:
    """A rational value for every ordered pair of distinct points."""

    space: FiniteMetricSpace
    values: Mapping[Pair, Fraction]

    def __post_init__(self):
        table = {_check_pair(self.space, p): to_fraction(v) for p, v in self.values.items()}
        if len(table) != len(self.space.pairs):
            missing = set(self.space.pairs) - set(table)
            raise ValueError(f"edge function misses {len(missing)} pairs, e.g. {sorted(missing)[:3]}")
        object.__setattr__(self, "values", table)

    def __getitem__(self, pair: Pair) -> Fraction:
        return self.values[pair]

    def sup_norm(self) -> Fraction:
        return max((abs(v) for v in self.values.values()), default=_ZERO)


@dataclass(frozen=True)
class DeLeeuwMeasure:
    """Sparse signed rational mass table on ordered pairs; zeros are dropped."""

    space: FiniteMetricSpace
    masses: Mapping[Pair, Fraction]

    def __post_init__(self):
        table = {}
        for p, v in self.masses.items():
            q = to_fraction(v)
            if q != 0:
                table[_check_pair(self.space, p)] = q
        object.__setattr__(self, "masses", table)

    def mass(self, pair: Pair) -> Fraction:
        return self.masses.get(pair, _ZERO)

    def total_mass(self) -> Fraction:
        return sum(self.masses.values(), _ZERO)

    def total_variation(self) -> Fraction:
        return sum((abs(v) for v in self.masses.values()), _ZERO)

    def is_positive(self) -> bool:
        return all(v > 0 for v in self.masses.values())

    def support(self) -> frozenset[Pair]:
        return frozenset(self.masses)

    def is_zero(self) -> bool:
        return not self.masses

    def __add__(self, other: "DeLeeuwMeasure") -> "DeLeeuwMeasure":
        _same_space(self, other)
        table = dict(self.masses)
        for p, v in other.masses.items():
            table[p] = table.get(p, _ZERO) + v
        return DeLeeuwMeasure(self.space, table)

    def __sub__(self, other: "DeLeeuwMeasure") -> "DeLeeuwMeasure":
        _same_space(self, other)
        table = dict(self.masses)
        for p, v in other.masses.items():
            table[p] = table.get(p, _ZERO) - v
        return DeLeeuwMeasure(self.space, table)

    def scaled(self, factor) -> "DeLeeuwMeasure":
        factor = to_fraction(factor)
        return DeLeeuwMeasure(self.space, {p: factor * v for p, v in self.masses.items()})


def _same_space(a, b) -> None:
    if a.space != b.space:
        raise ValueError("operands live over different spaces")


def dirac(space: FiniteMetricSpace, pair: Pair, mass=Fraction(1)) -> DeLeeuwMeasure:
    return DeLeeuwMeasure(space, {pair: to_fraction(mass)})


def phi(f: PointFunction) -> EdgeFunction:
    """Incremental-quotient table (f(x) - f(y)) / d(x, y) on ordered pairs."""
    space = f.space
    return EdgeFunction(
        space,
        {(x, y): (f.values[x] - f.values[y]) / space.d(x, y) for x, y in space.pairs},
    )


def phi_adjoint(mu: DeLeeuwMeasure) -> FreeElement:
    """The element represented by mu: the mass-weighted sum of molecules."""
    space = mu.space
    coeffs = [_ZERO] * (space.n - 1)
    for (x, y), v in mu.masses.items():
        q = v / space.d(x, y)
        if x != 0:
            coeffs[x - 1] += q
        if y != 0:
            coeffs[y - 1] -= q
    return FreeElement(space, tuple(coeffs))


def pair_edge_measure(g: EdgeFunction, mu: DeLeeuwMeasure) -> Fraction:
    """The integral of g against mu: a finite weighted sum."""
    _same_space(g, mu)
    return sum((v * g.values[p] for p, v in mu.masses.items()), _ZERO)


def is_optimal(mu: DeLeeuwMeasure) -> bool:
    """True iff mu is nonnegative and its total mass equals the norm of
    the element it represents."""
    if not mu.is_positive():
        return False
    return mu.total_mass() == norm_value(phi_adjoint(mu))


def optimal_representation(m: FreeElement) -> DeLeeuwMeasure:
    """A nonnegative representing measure of minimal total mass (an LP vertex)."""
    from .freespace import _solve_mass_lp

    _, masses = _solve_mass_lp(m)
    return DeLeeuwMeasure(m.space, masses)


def convex_integral(m: FreeElement) -> list[tuple[Fraction, Pair]]:
    """m written as a weighted sum of molecules with weights summing to its norm."""
    mu = optimal_representation(m)
    return [(mu.masses[p], p) for p in sorted(mu.masses)]


def restrict(mu: DeLeeuwMeasure, pairs: Iterable[Pair]) -> DeLeeuwMeasure:
    """Masses kept on ``pairs`` and zeroed elsewhere."""
    keep = {_check_pair(mu.space, p) for p in pairs}
    return DeLeeuwMeasure(mu.space, {p: v for p, v in mu.masses.items() if p in keep})


def weight(mu: DeLeeuwMeasure, h: Mapping, axis) -> DeLeeuwMeasure:
    """Reweight mu by a table h applied to the first coordinate (axis 1),
    the second coordinate (axis 2), or the pair itself (axis "pair").

    Missing table entries count as zero.  Point tables may also be given as
    a :class:`PointFunction`.
    """
    if isinstance(h, PointFunction):
        h = {i: h.values[i] for i in range(h.space.n)}
    table = {}
    if axis == 1:
        for (x, y), v in mu.masses.items():
            table[(x, y)] = to_fraction(h.get(x, _ZERO)) * v
    elif axis == 2:
        for (x, y), v in mu.masses.items():
            table[(x, y)] = to_fraction(h.get(y, _ZERO)) * v
    elif axis == "pair":
        for p, v in mu.masses.items():
            table[p] = to_fraction(h.get(p, _ZERO)) * v
    else:
        raise ValueError(f"axis must be 1, 2 or 'pair', got {axis!r}")
    return DeLeeuwMeasure(mu.space, table)


def marginal(mu: DeLeeuwMeasure, axis: int) -> dict[int, Fraction]:
    """Pushforward mass table on points along the chosen pair coordinate."""
    if axis not in (1, 2):
        raise ValueError(f"axis must be 1 or 2, got {axis!r}")
    out: dict[int, Fraction] = {}
    for (x, y), v in mu.masses.items():
        z = x if axis == 1 else y
        out[z] = out.get(z, _ZERO) + v
    return {z: v for z, v in sorted(out.items()) if v != 0}


def shadow(pairs: Iterable[Pair]) -> frozenset[int]:
    """All points that appear as either coordinate of a pair in the set."""
    out = set()
    for x, y in pairs:
        out.add(x)
        out.add(y)
    return frozenset(out)


class PartitionError(ValueError):
    """The given parts do not partition the ordered-pair set."""


def _check_partition(space: FiniteMetricSpace, parts: Sequence[Iterable[Pair]]):
    seen: dict[Pair, int] = {}
    normalized = []
    for k, part in enumerate(parts):
        block = set()
        for p in part:
            p = _check_pair(space, p)
            if p in seen:
                raise PartitionError(f"pair {p} appears in parts {seen[p]} and {k}")
            seen[p] = k
            block.add(p)
        normalized.append(block)
    missing = set(space.pairs) - set(seen)
    if missing:
        raise PartitionError(f"{len(missing)} pairs missing from the partition, e.g. {sorted(missing)[:3]}")
    return normalized


def decompose(
    m: FreeElement,
    parts: Sequence[Iterable[Pair]],
    representation: Optional[DeLeeuwMeasure] = None,
) -> list[FreeElement]:
    """Split m along a partition of the ordered-pair set.

    Each part contributes the element represented by the restriction of one
    fixed optimal representation of m.  The parts sum to m, their norms add
    up to the norm of m exactly, and each part is supported inside the
    support of m plus the base point.  To guarantee the support containment
    the representation is taken minimal in the measure quasi-order (an
    arbitrary optimal vertex may route mass through outside points);
    callers may pass their own ``representation`` instead.
    """
    blocks = _check_partition(m.space, parts)
    if representation is None:
        from .choquet import minimal_representation  # deferred: choquet imports this module

        representation = minimal_representation(m)
    return [phi_adjoint(restrict(representation, block)) for block in blocks]
