"""Elements of the free space over a finite pointed metric space.

An element is a rational coefficient vector over the non-base points; the
base-point coordinate is identically zero and not stored.  The norm is the
optimal value of a transportation-style linear program, computed twice -
once as the minimal total mass of a nonnegative representing measure on
ordered pairs, once as the maximal pairing against 1-Lipschitz functions -
and the two values are required to agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import exactlp
from .exactlp import EQ, LE, MAX, MIN, CertificateError, linear_program, lp_solve
from .metricspace import FiniteMetricSpace, rotate_base, scale_space
from .rational import to_fraction

_ZERO = Fraction(0)


@dataclass(frozen=True)
class FreeElement:
    """Rational coefficients a_x over the non-base points of a space."""

    space: FiniteMetricSpace
    coeffs: tuple[Fraction, ...]  # aligned with space.labels[1:]

    def __post_init__(self):
        if len(self.coeffs) != self.space.n - 1:
            raise ValueError(
                f"expected {self.space.n - 1} coefficients, got {len(self.coeffs)}"
            )

    def coeff(self, i: int) -> Fraction:
        """Coefficient of the evaluation functional at point index i."""
        if i == 0:
            return _ZERO
        return self.coeffs[i - 1]

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.coeffs)

    def __add__(self, other: "FreeElement") -> "FreeElement":
        _same_space(self, other)
        return FreeElement(self.space, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        _same_space(self, other)
        return FreeElement(self.space, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "FreeElement":
        return FreeElement(self.space, tuple(-a for a in self.coeffs))

    def scaled(self, factor) -> "FreeElement":
        factor = to_fraction(factor)
        return FreeElement(self.space, tuple(factor * a for a in self.coeffs))


def _same_space(a: FreeElement, b: FreeElement) -> None:
    if a.space != b.space:
        raise ValueError("elements live over different spaces")


def zero(space: FiniteMetricSpace) -> FreeElement:
    return FreeElement(space, tuple(_ZERO for _ in range(space.n - 1)))


def delta(space: FiniteMetricSpace, x: int) -> FreeElement:
    """Evaluation functional at point x (the zero element when x is the base)."""
    coeffs = [_ZERO] * (space.n - 1)
    if x != 0:
        coeffs[x - 1] = Fraction(1)
    return FreeElement(space, tuple(coeffs))


def from_coeff_map(space: FiniteMetricSpace, values: Mapping[int, Fraction]) -> FreeElement:
    coeffs = [_ZERO] * (space.n - 1)
    for i, v in values.items():
        if i == 0:
            raise ValueError("the base point carries no coefficient")
        coeffs[i - 1] = to_fraction(v)
    return FreeElement(space, tuple(coeffs))


def molecule(space: FiniteMetricSpace, x: int, y: int) -> FreeElement:
    """(delta(x) - delta(y)) / d(x, y), the canonical norm-one element."""
    if x == y:
        raise ValueError("a molecule needs two distinct points")
    inv = 1 / space.d(x, y)
    coeffs = [_ZERO] * (space.n - 1)
    if x != 0:
        coeffs[x - 1] += inv
    if y != 0:
        coeffs[y - 1] -= inv
    return FreeElement(space, tuple(coeffs))


def support(m: FreeElement) -> frozenset[int]:
    """Indices of the points with nonzero coefficient."""
    return frozenset(i + 1 for i, v in enumerate(m.coeffs) if v != 0)


@dataclass(frozen=True)
class PointFunction:
    """A rational function on the points, vanishing at the base point."""

    space: FiniteMetricSpace
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != self.space.n:
            raise ValueError("one value per point required")
        if self.values[0] != 0:
            raise ValueError("a point function must vanish at the base point")

    def __call__(self, i: int) -> Fraction:
        return self.values[i]


def point_function(space: FiniteMetricSpace, values) -> PointFunction:
    return PointFunction(space, tuple(to_fraction(v) for v in values))


def distance_function(space: FiniteMetricSpace, y: int) -> PointFunction:
    """x -> d(x, y) - d(0, y), the canonical norming function for pairs into y."""
    base = space.d(0, y)
    return PointFunction(space, tuple(space.d(x, y) - base for x in range(space.n)))


def pairing(f: PointFunction, m: FreeElement) -> Fraction:
    if f.space != m.space:
        raise ValueError("function and element live over different spaces")
    return sum((m.coeffs[i - 1] * f.values[i] for i in range(1, m.space.n)), _ZERO)


def lipschitz_norm(f: PointFunction):
    """Exact best Lipschitz constant and one attaining ordered pair.

    On a one-point space the empty supremum is 0 and the pair is None.
    """
    best = _ZERO
    arg = None
    space = f.space
    for x, y in space.pairs:
        q = (f.values[x] - f.values[y]) / space.d(x, y)
        if arg is None or q > best:
            best, arg = q, (x, y)
    if arg is None:
        return _ZERO, None
    return best, arg


# ---------------------------------------------------------------------------
# the two norm programs


def _mass_minimisation(m: FreeElement):
    """LP: minimise total mass of mu >= 0 on ordered pairs subject to the
    balance constraints that make mu represent m.  The base-point row is
    omitted; its balance is absorbed by delta(0) = 0."""
    space = m.space
    pairs = space.pairs
    rows = []
    for z in range(1, space.n):
        coeffs = []
        for (x, y) in pairs:
            if x == z:
                coeffs.append(1 / space.d(x, y))
            elif y == z:
                coeffs.append(-1 / space.d(x, y))
            else:
                coeffs.append(_ZERO)
        rows.append((tuple(coeffs), EQ, m.coeffs[z - 1]))
    objective = tuple(Fraction(1) for _ in pairs)
    return linear_program(MIN, objective, rows), pairs


def _lipschitz_maximisation(m: FreeElement):
    """LP: maximise <f, m> over functions with all incremental quotients <= 1."""
    space = m.space
    nvars = space.n - 1
    rows = []
    for (x, y) in space.pairs:
        coeffs = [_ZERO] * nvars
        if x != 0:
            coeffs[x - 1] += 1
        if y != 0:
            coeffs[y - 1] -= 1
        rows.append((tuple(coeffs), LE, space.d(x, y)))
    return linear_program(MAX, m.coeffs, rows, nonneg=[False] * nvars)


def _solve_mass_lp(m: FreeElement):
    problem, pairs = _mass_minimisation(m)
    outcome = lp_solve(problem)
    if outcome.status != exactlp.OPTIMAL:  # pragma: no cover - always feasible/bounded
        raise CertificateError(f"mass program ended {outcome.status}")
    masses = {p: v for p, v in zip(pairs, outcome.x) if v != 0}
    return outcome.value, masses


def norm_value(m: FreeElement) -> Fraction:
    """The free-space norm of m, via the mass-minimisation program only."""
    return _solve_mass_lp(m)[0]


@dataclass(frozen=True)
class FreeNorm:
    """Norm value with both optimal witnesses attached."""

    value: Fraction
    function: PointFunction  # 1-Lipschitz, pairs to value against the element
    measure: "DeLeeuwMeasure"  # nonnegative representation of minimal mass


def free_norm(m: FreeElement) -> FreeNorm:
    """Compute the norm by both programs and insist the values agree exactly.

    Returns the common value together with a dual witness f (a function of
    Lipschitz constant at most 1 with <f, m> equal to the norm) and a primal
    witness (an optimal nonnegative representing measure).
    """
    from .deleeuw import DeLeeuwMeasure  # deferred: deleeuw imports this module

    primal_value, masses = _solve_mass_lp(m)
    dual = lp_solve(_lipschitz_maximisation(m))
    if dual.status != exactlp.OPTIMAL:  # pragma: no cover
        raise CertificateError(f"Lipschitz program ended {dual.status}")
    if dual.value != primal_value:  # pragma: no cover
        raise CertificateError(
            f"duality gap: mass program {primal_value}, Lipschitz program {dual.value}"
        )
    f = PointFunction(m.space, (_ZERO,) + tuple(dual.x))
    return FreeNorm(
        value=primal_value,
        function=f,
        measure=DeLeeuwMeasure(m.space, masses),
    )


# ---------------------------------------------------------------------------
# isometries of the artifact


def rebase(m: FreeElement, new_base: int) -> FreeElement:
    """Coefficient vector of m after declaring ``new_base`` the base point.

    The move is the pairing identity <f, J m> = <f - f(new_base) 1, m>; it
    preserves the norm exactly.  The returned element lives over the space
    with ``new_base`` rotated to index 0.
    """
    if not 0 <= new_base < m.space.n:
        raise ValueError(f"point index {new_base} out of range")
    if new_base == 0:
        return m
    target = rotate_base(m.space, new_base)
    total = sum(m.coeffs, _ZERO)
    values: dict[str, Fraction] = {}
    for i in range(1, m.space.n):
        if i != new_base and m.coeffs[i - 1] != 0:
            values[m.space.labels[i]] = m.coeffs[i - 1]
    values[m.space.labels[0]] = -total
    coeffs = []
    for label in target.labels[1:]:
        coeffs.append(values.get(label, _ZERO))
    return FreeElement(target, tuple(coeffs))


def scale_metric(m: FreeElement, c) -> FreeElement:
    """Image of m under scaling the metric by c > 0: coefficients divide by c."""
    c = to_fraction(c)
    if c <= 0:
        raise ValueError("scale factor must be positive")
    target = scale_space(m.space, c)
    return FreeElement(target, tuple(v / c for v in m.coeffs))


def map_lipschitz_constant(
    source: FiniteMetricSpace, mapping: Sequence[int], target: FiniteMetricSpace
) -> Fraction:
    """Exact Lipschitz constant of a point map given as an index table."""
    best = _ZERO
    for x, y in source.pairs:
        q = target.d(mapping[x], mapping[y]) / source.d(x, y)
        if q > best:
            best = q
    return best


def pushforward(
    m: FreeElement, mapping: Sequence[int], target: FiniteMetricSpace
) -> FreeElement:
    """Linearised image of m under a base-preserving point map.

    ``mapping[x]`` is the target index of source point x; the base point
    must map to the base point.  Coefficients landing on the target base
    are dropped.
    """
    if len(mapping) != m.space.n:
        raise ValueError("mapping must cover every source point")
    if any(not 0 <= q < target.n for q in mapping):
        raise ValueError("mapping hits an unknown target index")
    if mapping[0] != 0:
        raise ValueError("the map must send the base point to the base point")
    coeffs = [_ZERO] * (target.n - 1)
    for i in range(1, m.space.n):
        q = mapping[i]
        if q != 0:
            coeffs[q - 1] += m.coeffs[i - 1]
    return FreeElement(target, tuple(coeffs))
