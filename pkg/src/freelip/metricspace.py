"""Finite pointed metric spaces with exact rational distances.

The base point always sits at index 0.  Axioms are checked exactly at
construction; betweenness, concavity and dilation search are all decided
with rational arithmetic, never with tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .rational import to_fraction


@dataclass(frozen=True)
class Asymmetry:
    i: int
    j: int

    def __str__(self):
        return f"d({self.i},{self.j}) != d({self.j},{self.i})"


@dataclass(frozen=True)
class NonzeroDiagonal:
    i: int

    def __str__(self):
        return f"d({self.i},{self.i}) != 0"


@dataclass(frozen=True)
class NonpositiveDistance:
    i: int
    j: int

    def __str__(self):
        return f"d({self.i},{self.j}) <= 0 for distinct points"


@dataclass(frozen=True)
class TriangleViolation:
    i: int
    j: int
    k: int

    def __str__(self):
        return f"d({self.i},{self.k}) > d({self.i},{self.j}) + d({self.j},{self.k})"


class InvalidMetricError(ValueError):
    """Carries the full list of violated axioms with witnessing indices."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Point labels plus a validated symmetric rational distance matrix."""

    labels: tuple[str, ...]
    dist: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    def d(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown point label {label!r}") from None

    @cached_property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        """All ordered pairs of distinct point indices."""
        n = self.n
        return tuple((x, y) for x in range(n) for y in range(n) if x != y)

    @cached_property
    def triples(self) -> tuple[tuple[int, int, int], ...]:
        """All ordered triples of pairwise distinct point indices."""
        n = self.n
        return tuple(
            (x, u, y)
            for x in range(n)
            for u in range(n)
            if u != x
            for y in range(n)
            if y != x and y != u
        )


def check_axioms(matrix) -> list:
    """Return the full list of metric-axiom violations of a square matrix."""
    n = len(matrix)
    violations = []
    for i in range(n):
        if matrix[i][i] != 0:
            violations.append(NonzeroDiagonal(i))
    for i in range(n):
        for j in range(i + 1, n):
            if matrix[i][j] != matrix[j][i]:
                violations.append(Asymmetry(i, j))
            if matrix[i][j] <= 0:
                violations.append(NonpositiveDistance(i, j))
    for i in range(n):
        for k in range(i + 1, n):
            for j in range(n):
                if j != i and j != k and matrix[i][k] > matrix[i][j] + matrix[j][k]:
                    violations.append(TriangleViolation(i, j, k))
    return violations


def validate(labels, matrix) -> FiniteMetricSpace:
    """Build a :class:`FiniteMetricSpace`, or raise with every violated axiom."""
    labels = tuple(str(x) for x in labels)
    if len(labels) < 1:
        raise ValueError("a metric space needs at least one point")
    if len(set(labels)) != len(labels):
        raise ValueError("point labels must be distinct")
    rows = [tuple(to_fraction(v) for v in row) for row in matrix]
    if len(rows) != len(labels) or any(len(r) != len(labels) for r in rows):
        raise ValueError(
            f"distance matrix must be {len(labels)}x{len(labels)} to match the labels"
        )
    violations = check_axioms(rows)
    if violations:
        raise InvalidMetricError(violations)
    return FiniteMetricSpace(labels=labels, dist=tuple(rows))


def is_between(space: FiniteMetricSpace, x: int, p: int, y: int) -> bool:
    """True iff p lies metrically between x and y: d(x,p) + d(p,y) = d(x,y)."""
    if len({x, p, y}) != 3:
        raise ValueError("is_between requires three distinct point indices")
    return space.d(x, p) + space.d(p, y) == space.d(x, y)


def is_concave(space: FiniteMetricSpace):
    """(True, None) iff the triangle inequality is strict on all distinct triples.

    Otherwise (False, (x, p, y)) with the first triple, in index order,
    where p lies between x and y.
    """
    n = space.n
    for x in range(n):
        for p in range(n):
            if p == x:
                continue
            for y in range(n):
                if y == x or y == p:
                    continue
                if space.d(x, p) + space.d(p, y) == space.d(x, y):
                    return False, (x, p, y)
    return True, None


@dataclass(frozen=True)
class Dilation:
    """A bijection scaling all distances by the same positive factor."""

    factor: Fraction
    mapping: tuple[int, ...]  # index in the source -> index in the target

    def check(self, source: FiniteMetricSpace, target: FiniteMetricSpace) -> bool:
        if sorted(self.mapping) != list(range(source.n)) or source.n != target.n:
            return False
        if self.factor <= 0:
            return False
        for i in range(source.n):
            for j in range(source.n):
                if target.d(self.mapping[i], self.mapping[j]) != self.factor * source.d(i, j):
                    return False
        return True


def _min_distance(space: FiniteMetricSpace) -> Fraction:
    return min(
        space.d(i, j) for i in range(space.n) for j in range(i + 1, space.n)
    )


def find_dilations(source: FiniteMetricSpace, target: FiniteMetricSpace) -> list[Dilation]:
    """All (c, pi) with pi a bijection of points and d'(pi x, pi y) = c d(x, y).

    The scale factor is forced by the minimal distances, and candidate
    bijections are grown point by point with exact consistency checks, so
    the search stays fast at this scale.  Bijections need not fix the base
    point.  One-point spaces admit exactly the trivial bijection, reported
    with factor 1.
    """
    n = source.n
    if n != target.n:
        return []
    if n == 1:
        return [Dilation(factor=Fraction(1), mapping=(0,))]
    c = _min_distance(target) / _min_distance(source)
    src_multiset = sorted(
        c * source.d(i, j) for i in range(n) for j in range(i + 1, n)
    )
    tgt_multiset = sorted(
        target.d(i, j) for i in range(n) for j in range(i + 1, n)
    )
    if src_multiset != tgt_multiset:
        return []
    found: list[Dilation] = []
    assignment = [-1] * n
    used = [False] * n

    def extend(i: int) -> None:
        if i == n:
            found.append(Dilation(factor=c, mapping=tuple(assignment)))
            return
        for q in range(n):
            if used[q]:
                continue
            ok = True
            for j in range(i):
                if target.d(q, assignment[j]) != c * source.d(i, j):
                    ok = False
                    break
            if ok:
                assignment[i] = q
                used[q] = True
                extend(i + 1)
                used[q] = False
                assignment[i] = -1

    extend(0)
    return found


def rotate_base(space: FiniteMetricSpace, new_base: int) -> FiniteMetricSpace:
    """Same points and metric, with ``new_base`` moved to index 0.

    The remaining points keep their original relative order.
    """
    if not 0 <= new_base < space.n:
        raise ValueError(f"point index {new_base} out of range")
    order = [new_base] + [i for i in range(space.n) if i != new_base]
    labels = tuple(space.labels[i] for i in order)
    dist = tuple(tuple(space.d(i, j) for j in order) for i in order)
    return FiniteMetricSpace(labels=labels, dist=dist)


def scale_space(space: FiniteMetricSpace, c: Fraction) -> FiniteMetricSpace:
    """The same point set with every distance multiplied by c > 0."""
    c = to_fraction(c)
    if c <= 0:
        raise ValueError("scale factor must be positive")
    dist = tuple(tuple(c * v for v in row) for row in space.dist)
    return FiniteMetricSpace(labels=space.labels, dist=dist)


def metric_repair(matrix) -> list[list[Fraction]]:
    """Shortest-path completion: the largest metric below a symmetric cost table.

    Used by the random generators; the result always satisfies the triangle
    inequality and keeps positivity off the diagonal.
    """
    n = len(matrix)
    d: list[list[Fraction]] = [[to_fraction(v) for v in row] for row in matrix]
    for k in range(n):
        for i in range(n):
            dik = d[i][k]
            for j in range(n):
                via = dik + d[k][j]
                if via < d[i][j]:
                    d[i][j] = via
    return d


def ordered_pair_index(space: FiniteMetricSpace) -> dict[tuple[int, int], int]:
    """Position of each ordered pair in ``space.pairs``."""
    return {p: k for k, p in enumerate(space.pairs)}
