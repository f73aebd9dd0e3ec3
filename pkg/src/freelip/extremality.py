"""Extreme points of the unit ball and isometry verification.

A molecule is an extreme point of the ball exactly when no third point
lies metrically between its endpoints.  That betweenness test is checked
here against an independent convex-geometry oracle (hull membership among
the other molecules), and extreme pairs receive exposing functionals with
an exact positive separation margin.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import exactlp
from .exactlp import EQ, LE, MAX, CertificateError, in_convex_hull, linear_program, lp_solve
from .freespace import (
    FreeElement,
    PointFunction,
    lipschitz_norm,
    molecule,
    norm_value,
    pairing,
)
from .metricspace import Dilation, FiniteMetricSpace

_ZERO = Fraction(0)


class NotExtremeError(ValueError):
    """Raised when an exposing functional is requested for a split molecule."""


@dataclass(frozen=True)
class ExtremalityVerdict:
    """Classification of one ordered pair, with a machine-checkable witness.

    Not extreme: ``between`` is a third point p with d(x,p) + d(p,y) = d(x,y).
    Extreme: ``functional`` pairs to 1 with this molecule and to at most
    1 - ``margin`` with every other one, margin > 0.
    """

    pair: tuple[int, int]
    extreme: bool
    between: Optional[int] = None
    functional: Optional[PointFunction] = None
    margin: Optional[Fraction] = None


def find_between(space: FiniteMetricSpace, x: int, y: int) -> Optional[int]:
    """First point index lying metrically between x and y, else None."""
    for p in range(space.n):
        if p != x and p != y and space.d(x, p) + space.d(p, y) == space.d(x, y):
            return p
    return None


def classify_molecule(
    space: FiniteMetricSpace, x: int, y: int, witness: bool = True
) -> ExtremalityVerdict:
    """Classify the molecule at (x, y) by the betweenness criterion.

    ``witness=False`` skips the exposing-functional LP and returns the bare
    verdict, which is what bulk scans need.
    """
    if x == y:
        raise ValueError("a molecule needs two distinct points")
    p = find_between(space, x, y)
    if p is not None:
        return ExtremalityVerdict(pair=(x, y), extreme=False, between=p)
    if not witness:
        return ExtremalityVerdict(pair=(x, y), extreme=True)
    functional, margin = exposing_functional(space, x, y)
    return ExtremalityVerdict(
        pair=(x, y), extreme=True, functional=functional, margin=margin
    )


def vertex_oracle(space: FiniteMetricSpace, x: int, y: int) -> bool:
    """True iff the molecule at (x, y) is NOT in the convex hull of the others.

    Because the ball is the convex hull of the molecules, non-membership is
    equivalent to extremality; this is the independent cross-check for
    :func:`classify_molecule`.
    """
    if x == y:
        raise ValueError("a molecule needs two distinct points")
    target = molecule(space, x, y).coeffs
    generators = [
        molecule(space, u, v).coeffs for (u, v) in space.pairs if (u, v) != (x, y)
    ]
    return not in_convex_hull(target, generators).inside


def extreme_points(
    space: FiniteMetricSpace, witness: bool = True
) -> list[ExtremalityVerdict]:
    """Classify every ordered pair; never empty of extreme verdicts.

    A single-point space has no molecules to classify and is rejected.
    """
    if space.n < 2:
        raise ValueError("extreme-point classification needs at least two points")
    return [classify_molecule(space, x, y, witness=witness) for x, y in space.pairs]


def exposing_functional(space: FiniteMetricSpace, x: int, y: int):
    """A norm-one function pairing to 1 at (x, y) and to at most 1 - margin
    elsewhere, with the worst-case margin maximised by an LP.

    Raises :class:`NotExtremeError` when a point sits between x and y, in
    which case no such function exists.
    """
    p = find_between(space, x, y)
    if p is not None:
        raise NotExtremeError(
            f"molecule ({x},{y}) splits through point {p}; it has no exposing functional"
        )
    nf = space.n - 1  # function values at non-base points; the margin is one more
    rows = []
    coeffs = [_ZERO] * (nf + 1)
    if x != 0:
        coeffs[x - 1] += 1
    if y != 0:
        coeffs[y - 1] -= 1
    rows.append((tuple(coeffs), EQ, space.d(x, y)))
    for (u, v) in space.pairs:
        if (u, v) == (x, y):
            continue
        d = space.d(u, v)
        coeffs = [_ZERO] * (nf + 1)
        if u != 0:
            coeffs[u - 1] += 1
        if v != 0:
            coeffs[v - 1] -= 1
        coeffs[nf] = d
        rows.append((tuple(coeffs), LE, d))
    objective = tuple(_ZERO for _ in range(nf)) + (Fraction(1),)
    problem = linear_program(MAX, objective, rows, nonneg=[False] * (nf + 1))
    outcome = lp_solve(problem)
    if outcome.status != exactlp.OPTIMAL:  # pragma: no cover - feasible and bounded
        raise CertificateError(f"margin program ended {outcome.status}")
    margin = outcome.value
    if margin <= 0:  # pragma: no cover - contradicts exposedness of extreme molecules
        raise CertificateError(f"extreme pair ({x},{y}) received margin {margin}")
    f = PointFunction(space, (_ZERO,) + tuple(outcome.x[:nf]))
    _check_exposing(space, x, y, f, margin)
    return f, margin


def _check_exposing(space, x, y, f: PointFunction, margin: Fraction) -> None:
    if pairing(f, molecule(space, x, y)) != 1:
        raise CertificateError("functional does not pair to 1 with its molecule")
    value, _ = lipschitz_norm(f)
    if value != 1:
        raise CertificateError("exposing functional is not of norm one")
    for (u, v) in space.pairs:
        if (u, v) == (x, y):
            continue
        if pairing(f, molecule(space, u, v)) > 1 - margin:
            raise CertificateError("margin is not met by some other molecule")


# ---------------------------------------------------------------------------
# isometries induced by dilations


@dataclass(frozen=True)
class BanachStoneReport:
    """Exact verification record for the isometry induced by a dilation.

    ``matrix[j]`` is the coefficient vector (over the target non-base
    points) of the image of the evaluation functional at source point j+1.
    """

    dilation: Dilation
    matrix: tuple[tuple[Fraction, ...], ...]
    molecule_bijection: bool
    norms_preserved_on_basis: bool
    norms_preserved_on_samples: bool
    extreme_sets_correspond: bool

    @property
    def ok(self) -> bool:
        return (
            self.molecule_bijection
            and self.norms_preserved_on_basis
            and self.norms_preserved_on_samples
            and self.extreme_sets_correspond
        )


def _image_of_delta(
    source: FiniteMetricSpace, target: FiniteMetricSpace, dil: Dilation, j: int
) -> tuple[Fraction, ...]:
    # (1/c) (delta'(pi(j)) - delta'(pi(0))): the base change folds into a shift
    coeffs = [_ZERO] * (target.n - 1)
    inv = 1 / dil.factor
    pj = dil.mapping[j]
    p0 = dil.mapping[0]
    if pj != 0:
        coeffs[pj - 1] += inv
    if p0 != 0:
        coeffs[p0 - 1] -= inv
    return tuple(coeffs)


def apply_linear_map(
    matrix: Sequence[tuple[Fraction, ...]], m: FreeElement, target: FiniteMetricSpace
) -> FreeElement:
    coeffs = [_ZERO] * (target.n - 1)
    for j, a in enumerate(m.coeffs):
        if a:
            for k, v in enumerate(matrix[j]):
                if v:
                    coeffs[k] += a * v
    return FreeElement(target, tuple(coeffs))


def verify_banach_stone(
    source: FiniteMetricSpace,
    target: FiniteMetricSpace,
    dil: Dilation,
    samples: int = 5,
    seed: int = 20408,
) -> BanachStoneReport:
    """Build the linear isometry induced by a dilation and verify it exactly.

    The map scales by 1/c, relabels points along the bijection and rebases
    at the image of the source base point.  The report certifies that it
    sends molecules bijectively onto molecules, preserves norms on the
    evaluation basis and on pseudo-random rational elements, and carries
    the extreme pairs onto the extreme pairs.
    """
    if not dil.check(source, target):
        raise ValueError("the mapping is not a dilation between these spaces")
    matrix = tuple(
        _image_of_delta(source, target, dil, j) for j in range(1, source.n)
    )

    molecule_bijection = True
    for (u, v) in source.pairs:
        image = apply_linear_map(matrix, molecule(source, u, v), target)
        expected = molecule(target, dil.mapping[u], dil.mapping[v])
        if image != expected:
            molecule_bijection = False
            break

    norms_basis = True
    for j in range(1, source.n):
        e = FreeElement(
            source,
            tuple(Fraction(int(i == j - 1)) for i in range(source.n - 1)),
        )
        if norm_value(apply_linear_map(matrix, e, target)) != norm_value(e):
            norms_basis = False
            break

    rng = random.Random(seed)
    norms_samples = True
    for _ in range(samples):
        coeffs = tuple(
            Fraction(rng.randint(-24, 24), rng.randint(1, 6))
            for _ in range(source.n - 1)
        )
        m = FreeElement(source, coeffs)
        if norm_value(apply_linear_map(matrix, m, target)) != norm_value(m):
            norms_samples = False
            break

    source_extreme = {
        (u, v) for (u, v) in source.pairs if find_between(source, u, v) is None
    }
    target_extreme = {
        (u, v) for (u, v) in target.pairs if find_between(target, u, v) is None
    }
    mapped = {(dil.mapping[u], dil.mapping[v]) for (u, v) in source_extreme}
    extreme_match = mapped == target_extreme

    return BanachStoneReport(
        dilation=dil,
        matrix=matrix,
        molecule_bijection=molecule_bijection,
        norms_preserved_on_basis=norms_basis,
        norms_preserved_on_samples=norms_samples,
        extreme_sets_correspond=extreme_match,
    )
