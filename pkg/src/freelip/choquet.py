"""The weighted-triangle cone and the quasi-order it induces on pair measures.

An edge function g belongs to the cone G when

    d(x,y) g(x,y) <= d(x,u) g(x,u) + d(u,y) g(u,y)

for all pairwise distinct x, u, y.  Dually, each such triple carries a
"triangle move": the vector with d(x,u) at (x,u), d(u,y) at (u,y) and
-d(x,y) at (x,y).  G is exactly the set of edge functions pairing
nonnegatively with every move, so by exact Farkas duality

    mu <= nu  (every g in G pairs mu below nu)
        iff  nu - mu is a nonnegative combination of triangle moves.

That polyhedral reading turns the quasi-order into a feasibility LP whose
certificates are move weights (when it holds) or a separating member of G
(when it fails).  Minimal measures are obtained in one LP by minimising
the pairing with the strictly move-decreasing weight g0 = 1/(1 + d); the
strict decrease is re-verified on every space rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional

from . import exactlp
from .deleeuw import (
    DeLeeuwMeasure,
    EdgeFunction,
    Pair,
    is_optimal,
    optimal_representation,
    pair_edge_measure,
    phi_adjoint,
)
from .exactlp import EQ, GE, LE, MAX, MIN, CertificateError, linear_program, lp_solve
from .freespace import FreeElement, zero
from .metricspace import FiniteMetricSpace
from .rational import to_fraction

_ZERO = Fraction(0)

Triple = tuple[int, int, int]


@dataclass(frozen=True)
class TriangleMove:
    """The move splitting mass at (x,y) through the intermediate point u."""

    x: int
    u: int
    y: int

    @property
    def triple(self) -> Triple:
        return (self.x, self.u, self.y)

    def entries(self, space: FiniteMetricSpace) -> dict[Pair, Fraction]:
        return {
            (self.x, self.u): space.d(self.x, self.u),
            (self.u, self.y): space.d(self.u, self.y),
            (self.x, self.y): -space.d(self.x, self.y),
        }


@lru_cache(maxsize=None)
def triangle_moves(space: FiniteMetricSpace) -> tuple[TriangleMove, ...]:
    return tuple(TriangleMove(x, u, y) for (x, u, y) in space.triples)


@lru_cache(maxsize=None)
def g_zero(space: FiniteMetricSpace) -> EdgeFunction:
    """The weight 1/(1 + d), a member of G that strictly decreases along moves."""
    return EdgeFunction(
        space, {(x, y): 1 / (1 + space.d(x, y)) for x, y in space.pairs}
    )


@lru_cache(maxsize=None)
def min_move_gap(space: FiniteMetricSpace) -> Optional[Fraction]:
    """Smallest pairing of g0 with a triangle move; None when there are no moves.

    Strict positivity underwrites antisymmetry of the quasi-order and the
    single-LP computation of minimal measures, so it is checked at runtime
    on every space instead of being assumed.
    """
    g0 = g_zero(space)
    best = None
    for move in triangle_moves(space):
        total = sum(
            (v * g0.values[p] for p, v in move.entries(space).items()), _ZERO
        )
        if best is None or total < best:
            best = total
    return best


def _require_strict_moves(space: FiniteMetricSpace) -> None:
    gap = min_move_gap(space)
    if gap is not None and gap <= 0:  # pragma: no cover - mathematically impossible
        raise CertificateError(
            f"g0 fails to decrease strictly along some triangle move (gap {gap})"
        )


def in_cone_G(g: EdgeFunction):
    """Exact cone test; returns (True, None) or (False, first violating triple)."""
    space = g.space
    for (x, u, y) in space.triples:
        lhs = space.d(x, y) * g.values[(x, y)]
        rhs = space.d(x, u) * g.values[(x, u)] + space.d(u, y) * g.values[(u, y)]
        if lhs > rhs:
            return False, (x, u, y)
    return True, None


class TauValidationError(ValueError):
    """The distance profile fails monotonicity or subadditivity; carries a witness."""

    def __init__(self, message, witness):
        self.witness = witness
        super().__init__(message)


def tau_edge_function(space: FiniteMetricSpace, tau: Mapping) -> EdgeFunction:
    """Build g = tau(d) from a rational table on distance values.

    The table must cover every distance of the space and may contain extra
    values (e.g. at sums of distances).  The profile t -> t tau(t) is
    checked exactly for monotonicity and subadditivity on every combination
    available in the table, and the resulting edge function is finally
    verified against the cone inequalities directly, which is the deciding
    check: table values alone cannot speak for points between the sampled
    sums.
    """
    table = {to_fraction(t): to_fraction(v) for t, v in tau.items()}
    needed = {space.d(x, y) for x, y in space.pairs}
    missing = sorted(needed - set(table))
    if missing:
        raise ValueError(f"tau table misses distance values {missing}")
    profile = sorted((t, t * v) for t, v in table.items())
    for t, tv in profile:
        if tv < 0:
            raise TauValidationError(
                f"t*tau(t) = {tv} < 0 at t = {t}; the profile cannot increase from 0",
                (Fraction(0), t),
            )
    for i, (t, tv) in enumerate(profile):
        for s, sv in profile[i + 1 :]:
            if t < s and tv > sv:
                raise TauValidationError(
                    f"t*tau(t) decreases from {tv} at t = {t} to {sv} at t = {s}",
                    (t, s),
                )
    values = set(table)
    for t, tv in profile:
        for s, sv in profile:
            if t + s in values:
                total = (t + s) * table[t + s]
                if total > tv + sv:
                    raise TauValidationError(
                        f"t*tau(t) is superadditive at {t} + {s}: {total} > {tv} + {sv}",
                        (t, s, t + s),
                    )
    g = EdgeFunction(space, {(x, y): table[space.d(x, y)] for x, y in space.pairs})
    ok, witness = in_cone_G(g)
    if not ok:
        raise TauValidationError(
            f"tau(d) leaves the cone at triple {witness}", witness
        )
    return g


# ---------------------------------------------------------------------------
# the quasi-order


@dataclass(frozen=True)
class PrecedenceCertificate:
    """Nonnegative move weights with nu - mu = sum of weighted moves, exactly."""

    weights: Mapping[Triple, Fraction]

    def verify(self, mu: DeLeeuwMeasure, nu: DeLeeuwMeasure) -> None:
        space = mu.space
        delta: dict[Pair, Fraction] = dict((nu - mu).masses)
        for triple, w in self.weights.items():
            if w < 0:
                raise CertificateError(f"negative move weight at {triple}")
            for p, v in TriangleMove(*triple).entries(space).items():
                delta[p] = delta.get(p, _ZERO) - w * v
        if any(v != 0 for v in delta.values()):
            raise CertificateError("move weights do not reproduce nu - mu")


@dataclass(frozen=True)
class PrecedesResult:
    holds: bool
    certificate: Optional[PrecedenceCertificate] = None
    separator: Optional[EdgeFunction] = None


def _require_positive(mu: DeLeeuwMeasure, name: str) -> None:
    if not mu.is_positive():
        raise ValueError(f"{name} must be a nonnegative measure")


def precedes(mu: DeLeeuwMeasure, nu: DeLeeuwMeasure) -> PrecedesResult:
    """Decide mu <= nu in the quasi-order, with a certificate either way.

    Positive verdicts return move weights; negative verdicts return a
    member of G pairing strictly larger with mu than with nu, built from
    the Farkas certificate of the feasibility program.
    """
    if mu.space != nu.space:
        raise ValueError("measures live over different spaces")
    _require_positive(mu, "mu")
    _require_positive(nu, "nu")
    space = mu.space
    moves = triangle_moves(space)
    pairs = space.pairs
    delta = nu - mu
    columns = [move.entries(space) for move in moves]
    rows = []
    for p in pairs:
        rows.append(
            (tuple(col.get(p, _ZERO) for col in columns), EQ, delta.mass(p))
        )
    problem = linear_program(MAX, tuple(_ZERO for _ in moves), rows)
    outcome = lp_solve(problem)
    if outcome.status == exactlp.OPTIMAL:
        weights = {
            moves[k].triple: v for k, v in enumerate(outcome.x) if v != 0
        }
        certificate = PrecedenceCertificate(weights)
        certificate.verify(mu, nu)
        return PrecedesResult(holds=True, certificate=certificate)
    values = {p: -y for p, y in zip(pairs, outcome.farkas)}
    scale = max((abs(v) for v in values.values()), default=Fraction(1))
    if scale:
        values = {p: v / scale for p, v in values.items()}
    g = EdgeFunction(space, values)
    ok, witness = in_cone_G(g)
    if not ok:  # pragma: no cover - Farkas output is always in the cone
        raise CertificateError(f"separator leaves the cone at {witness}")
    if pair_edge_measure(g, mu) <= pair_edge_measure(g, nu):  # pragma: no cover
        raise CertificateError("separator fails to separate")
    return PrecedesResult(holds=False, separator=g)


def precedes_via_cone_lp(mu: DeLeeuwMeasure, nu: DeLeeuwMeasure) -> bool:
    """Decide mu <= nu directly: minimise <g, nu - mu> over the cone box.

    This is the definition-side route, used to cross-validate the
    triangle-move encoding: it quantifies over g in G with sup norm at
    most 1 instead of expressing nu - mu in terms of moves.
    """
    if mu.space != nu.space:
        raise ValueError("measures live over different spaces")
    _require_positive(mu, "mu")
    _require_positive(nu, "nu")
    space = mu.space
    pairs = space.pairs
    index = {p: k for k, p in enumerate(pairs)}
    delta = nu - mu
    rows = []
    for (x, u, y) in space.triples:
        coeffs = [_ZERO] * len(pairs)
        coeffs[index[(x, u)]] += space.d(x, u)
        coeffs[index[(u, y)]] += space.d(u, y)
        coeffs[index[(x, y)]] -= space.d(x, y)
        rows.append((tuple(coeffs), GE, _ZERO))
    one = Fraction(1)
    for k in range(len(pairs)):
        unit = [_ZERO] * len(pairs)
        unit[k] = one
        rows.append((tuple(unit), LE, one))
        rows.append((tuple(unit), GE, -one))
    objective = tuple(delta.mass(p) for p in pairs)
    problem = linear_program(MIN, objective, rows, nonneg=[False] * len(pairs))
    outcome = lp_solve(problem)
    if outcome.status != exactlp.OPTIMAL:  # pragma: no cover - box is compact
        raise CertificateError(f"cone program ended {outcome.status}")
    return outcome.value >= 0


def _tight_moves(space: FiniteMetricSpace) -> tuple[TriangleMove, ...]:
    """Moves whose intermediate point lies metrically between the endpoints."""
    return tuple(
        move
        for move in triangle_moves(space)
        if space.d(move.x, move.u) + space.d(move.u, move.y)
        == space.d(move.x, move.y)
    )


def _minimise_over_moves(mu: DeLeeuwMeasure, moves) -> DeLeeuwMeasure:
    """g0-minimal candidate + weighted moves = mu, as one LP.

    Pairs neither carrying mass nor touched by a retained move are forced
    to stay empty and are left out of the program.
    """
    space = mu.space
    columns = [move.entries(space) for move in moves]
    active = set(mu.support())
    for col in columns:
        active.update(col)
    pairs = sorted(active)
    npairs = len(pairs)
    g0 = g_zero(space)
    rows = []
    for k, p in enumerate(pairs):
        coeffs = [_ZERO] * npairs + [col.get(p, _ZERO) for col in columns]
        coeffs[k] = Fraction(1)
        rows.append((tuple(coeffs), EQ, mu.mass(p)))
    objective = tuple(g0.values[p] for p in pairs) + tuple(_ZERO for _ in moves)
    problem = linear_program(MIN, objective, rows)
    outcome = lp_solve(problem)
    if outcome.status != exactlp.OPTIMAL:  # pragma: no cover - always feasible/bounded
        raise CertificateError(f"minimisation ended {outcome.status}")
    nu = DeLeeuwMeasure(space, {p: v for p, v in zip(pairs, outcome.x[:npairs]) if v != 0})
    if phi_adjoint(nu) != phi_adjoint(mu):  # pragma: no cover - moves preserve the element
        raise CertificateError("minimal measure represents a different element")
    return nu


def minimal_below(mu: DeLeeuwMeasure) -> DeLeeuwMeasure:
    """The measure below mu in the quasi-order minimising the g0 pairing.

    Solved as one LP over pairs (the candidate) and move weights (the
    descent), tied by candidate + moves = mu.  Because g0 pairs strictly
    positively with every move, the optimum is a minimal measure, the map
    is idempotent, and a measure is minimal exactly when it is its own
    output.  Optimality of the input is inherited by the output.

    The full move set must be offered in general: a pair of opposite
    masses can be annihilated through moves whose legs carry no mass of
    their own (they feed each other), so no support-based pruning is
    sound.  When mu is optimal, though, mass is conserved along the
    quasi-order, hence only moves with zero triangle gap can fire; the
    program is then restricted to those, which in particular makes
    optimal measures over concave spaces immediately minimal.
    """
    _require_positive(mu, "mu")
    space = mu.space
    _require_strict_moves(space)
    moves = triangle_moves(space)
    if not moves:
        return mu
    if is_optimal(mu):
        moves = _tight_moves(space)
        if not moves:
            return mu
    return _minimise_over_moves(mu, moves)


def is_minimal(mu: DeLeeuwMeasure) -> bool:
    """True iff nothing strictly below mu exists: mu is its own minimisation."""
    return minimal_below(mu) == mu


def minimal_representation(m: FreeElement) -> DeLeeuwMeasure:
    """An optimal representation of m that is also minimal in the quasi-order."""
    return minimal_below(optimal_representation(m))


def diagonal_decompose(m: FreeElement):
    """Split m into a molecule part and a diagonal part, with a certificate.

    On a finite space the diagonal is empty, so the diagonal part is always
    the zero element; the certificate is an optimal, minimal representation
    of m living on actual ordered pairs, witnessing that m is a convex
    combination of molecules of total weight equal to its norm.
    """
    certificate = minimal_representation(m)
    return m, zero(m.space), certificate
