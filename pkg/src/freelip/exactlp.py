"""Exact rational linear programming with certified outcomes.

A dense two-phase simplex over exact rational arithmetic, built for
correctness on small instances rather than throughput.  Every outcome
carries a certificate that closes the loop by direct substitution:

* ``optimal``    - primal and dual solutions satisfying feasibility,
                   complementary slackness and equal objective values;
* ``infeasible`` - a Farkas vector proving no feasible point exists;
* ``unbounded``  - a feasible point plus an improving ray.

``lp_solve`` re-verifies the certificate before returning, so a wrong
answer cannot escape unnoticed.  Pivoting follows Bland's rule, which
rules out cycling and guarantees termination; at this scale it measures
no slower than greedier rules.

Internally the tableau is computed with ``gmpy2.mpq`` when available (it
is an order of magnitude faster than ``fractions.Fraction`` on small
values); the public API speaks ``Fraction`` only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .rational import to_fraction

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _Q = Fraction

MAX = "max"
MIN = "min"
LE = "<="
EQ = "="
GE = ">="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = _Q(0)


class LPFormatError(ValueError):
    """Malformed problem: inconsistent dimensions or unknown senses."""


class CertificateError(Exception):
    """An outcome failed its own exact re-verification."""


Row = tuple[tuple[Fraction, ...], str, Fraction]


@dataclass(frozen=True)
class LinearProgram:
    """``sense`` objective ``c.x`` subject to rows ``a.x <sense> b``.

    ``nonneg[j]`` marks variable j as constrained to ``x_j >= 0``;
    otherwise it is free.
    """

    sense: str
    objective: tuple[Fraction, ...]
    rows: tuple[Row, ...]
    nonneg: tuple[bool, ...]

    @property
    def nvars(self) -> int:
        return len(self.objective)


def linear_program(sense, objective, rows, nonneg=None) -> LinearProgram:
    """Build and validate a :class:`LinearProgram` from loose inputs."""
    if sense not in (MAX, MIN):
        raise LPFormatError(f"sense must be {MAX!r} or {MIN!r}, got {sense!r}")
    c = tuple(to_fraction(v) for v in objective)
    n = len(c)
    norm_rows = []
    for k, (coeffs, rsense, rhs) in enumerate(rows):
        a = tuple(to_fraction(v) for v in coeffs)
        if len(a) != n:
            raise LPFormatError(f"row {k} has {len(a)} coefficients, expected {n}")
        if rsense not in (LE, EQ, GE):
            raise LPFormatError(f"row {k} has unknown sense {rsense!r}")
        norm_rows.append((a, rsense, to_fraction(rhs)))
    if nonneg is None:
        nn = tuple(True for _ in range(n))
    else:
        nn = tuple(bool(v) for v in nonneg)
        if len(nn) != n:
            raise LPFormatError(f"nonneg has length {len(nn)}, expected {n}")
    return LinearProgram(sense, c, tuple(norm_rows), nn)


@dataclass(frozen=True)
class LPOutcome:
    """Certified result of :func:`lp_solve`.

    ``x``/``y``/``value`` are set when optimal.  ``farkas`` is an
    infeasibility certificate; ``x``/``ray`` witness unboundedness.
    """

    status: str
    x: Optional[tuple[Fraction, ...]] = None
    y: Optional[tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None
    farkas: Optional[tuple[Fraction, ...]] = None
    ray: Optional[tuple[Fraction, ...]] = None

    def verify(self, problem: LinearProgram) -> None:
        """Re-check the certificate by direct substitution; raise on failure."""
        if self.status == OPTIMAL:
            _verify_optimal(problem, self)
        elif self.status == INFEASIBLE:
            _verify_farkas(problem, self.farkas)
        elif self.status == UNBOUNDED:
            _verify_ray(problem, self)
        else:
            raise CertificateError(f"unknown status {self.status!r}")


def _dot(u, v) -> Fraction:
    total = Fraction(0)
    for a, b in zip(u, v):
        if a and b:
            total += a * b
    return total


def _check_primal_point(problem: LinearProgram, x) -> None:
    if len(x) != problem.nvars:
        raise CertificateError("primal point has wrong dimension")
    for j, nn in enumerate(problem.nonneg):
        if nn and x[j] < 0:
            raise CertificateError(f"x[{j}] = {x[j]} violates nonnegativity")
    for k, (a, sense, b) in enumerate(problem.rows):
        lhs = _dot(a, x)
        ok = lhs <= b if sense == LE else lhs >= b if sense == GE else lhs == b
        if not ok:
            raise CertificateError(f"row {k}: {lhs} {sense} {b} fails")


def _verify_optimal(problem: LinearProgram, out: LPOutcome) -> None:
    if out.x is None or out.y is None or out.value is None:
        raise CertificateError("optimal outcome missing fields")
    _check_primal_point(problem, out.x)
    if _dot(problem.objective, out.x) != out.value:
        raise CertificateError("objective value mismatch")
    y = out.y
    if len(y) != len(problem.rows):
        raise CertificateError("dual vector has wrong dimension")
    maximize = problem.sense == MAX
    for k, (_, sense, _) in enumerate(problem.rows):
        if sense == LE and (y[k] < 0 if maximize else y[k] > 0):
            raise CertificateError(f"dual sign on row {k}")
        if sense == GE and (y[k] > 0 if maximize else y[k] < 0):
            raise CertificateError(f"dual sign on row {k}")
    rhs_total = Fraction(0)
    for k, (_, _, b) in enumerate(problem.rows):
        rhs_total += y[k] * b
    if rhs_total != out.value:
        raise CertificateError("strong duality fails")
    for j in range(problem.nvars):
        reduced = Fraction(0)
        for k, (a, _, _) in enumerate(problem.rows):
            if y[k] and a[j]:
                reduced += y[k] * a[j]
        reduced -= problem.objective[j]
        if problem.nonneg[j]:
            if maximize and reduced < 0:
                raise CertificateError(f"dual feasibility fails at column {j}")
            if not maximize and reduced > 0:
                raise CertificateError(f"dual feasibility fails at column {j}")
            if out.x[j] != 0 and reduced != 0:
                raise CertificateError(f"complementary slackness fails at column {j}")
        elif reduced != 0:
            raise CertificateError(f"dual equality fails at free column {j}")
    for k, (a, _, b) in enumerate(problem.rows):
        if y[k] != 0 and _dot(a, out.x) != b:
            raise CertificateError(f"complementary slackness fails at row {k}")


def _verify_farkas(problem: LinearProgram, y) -> None:
    if y is None or len(y) != len(problem.rows):
        raise CertificateError("missing or misshapen Farkas vector")
    for k, (_, sense, _) in enumerate(problem.rows):
        if sense == LE and y[k] > 0:
            raise CertificateError(f"Farkas sign on row {k}")
        if sense == GE and y[k] < 0:
            raise CertificateError(f"Farkas sign on row {k}")
    for j in range(problem.nvars):
        combo = Fraction(0)
        for k, (a, _, _) in enumerate(problem.rows):
            if y[k] and a[j]:
                combo += y[k] * a[j]
        if problem.nonneg[j]:
            if combo > 0:
                raise CertificateError(f"Farkas combination positive at column {j}")
        elif combo != 0:
            raise CertificateError(f"Farkas combination nonzero at free column {j}")
    rhs = Fraction(0)
    for k, (_, _, b) in enumerate(problem.rows):
        rhs += y[k] * b
    if rhs <= 0:
        raise CertificateError("Farkas right-hand side not positive")


def _verify_ray(problem: LinearProgram, out: LPOutcome) -> None:
    if out.x is None or out.ray is None:
        raise CertificateError("unbounded outcome missing witness")
    _check_primal_point(problem, out.x)
    d = out.ray
    if len(d) != problem.nvars:
        raise CertificateError("ray has wrong dimension")
    for j, nn in enumerate(problem.nonneg):
        if nn and d[j] < 0:
            raise CertificateError(f"ray leaves the domain at column {j}")
    for k, (a, sense, _) in enumerate(problem.rows):
        drift = _dot(a, d)
        ok = drift <= 0 if sense == LE else drift >= 0 if sense == GE else drift == 0
        if not ok:
            raise CertificateError(f"ray violates row {k}")
    gain = _dot(problem.objective, d)
    if problem.sense == MAX and gain <= 0:
        raise CertificateError("ray does not improve the objective")
    if problem.sense == MIN and gain >= 0:
        raise CertificateError("ray does not improve the objective")


# ---------------------------------------------------------------------------
# simplex core


def _pivot(tableau, basis, r, j) -> None:
    row = tableau[r]
    pv = row[j]
    if pv != 1:
        inv = 1 / pv
        row = [v * inv for v in row]
        tableau[r] = row
    for i, other in enumerate(tableau):
        if i == r:
            continue
        f = other[j]
        if f:
            tableau[i] = [a - f * b for a, b in zip(other, row)]
    basis[r] = j


def _simplex(tableau, basis, banned, art_cols, art_priority: bool):
    """Run Bland-rule iterations until optimal or unbounded.

    Returns ``(OPTIMAL, None)`` or ``(UNBOUNDED, entering_column)``.
    ``banned`` columns never enter.  With ``art_priority`` set, an entering
    column touching a row whose basic variable is artificial pivots there
    first (at ratio zero), so artificial variables can never rise above 0.
    """
    m = len(basis)
    width = len(tableau[m]) - 1
    guard = 0
    limit = 8192 + 256 * (m + width)
    while True:
        guard += 1
        if guard > limit:  # pragma: no cover - would indicate a cycling bug
            raise CertificateError("simplex iteration limit exceeded")
        cost = tableau[m]
        enter = -1
        for j in range(width):
            if j not in banned and cost[j] > 0:
                enter = j
                break
        if enter < 0:
            return OPTIMAL, None
        leave = -1
        if art_priority:
            for i in range(m):
                if basis[i] in art_cols and tableau[i][enter] != 0:
                    leave = i
                    break
        if leave < 0:
            best_ratio = None
            for i in range(m):
                a = tableau[i][enter]
                if a > 0:
                    ratio = tableau[i][-1] / a
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[leave])
                    ):
                        best_ratio = ratio
                        leave = i
            if leave < 0:
                return UNBOUNDED, enter
        _pivot(tableau, basis, leave, enter)


# ---------------------------------------------------------------------------
# canonicalisation and certificate assembly


def _fractions(values) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(v.numerator), int(v.denominator)) for v in values)


def _solve(problem: LinearProgram) -> LPOutcome:
    maximize = problem.sense == MAX
    n = problem.nvars
    m = len(problem.rows)

    # structural columns, splitting free variables into x+ - x-
    var_cols: list[tuple[int, Optional[int]]] = []
    col_cost: list = []
    for j in range(n):
        cj = _Q(problem.objective[j].numerator, problem.objective[j].denominator)
        if not maximize:
            cj = -cj
        pos = len(col_cost)
        col_cost.append(cj)
        neg = None
        if not problem.nonneg[j]:
            neg = len(col_cost)
            col_cost.append(-cj)
        var_cols.append((pos, neg))
    ns = len(col_cost)

    # rows canonicalised to  a.x (= with slack) b,  b >= 0
    canon = []  # [dense coeffs, rhs, flip, has_slack, slack_sign]
    for coeffs, sense, rhs in problem.rows:
        a = [_ZERO] * ns
        for j in range(n):
            v = coeffs[j]
            if v:
                q = _Q(v.numerator, v.denominator)
                pos, neg = var_cols[j]
                a[pos] = q
                if neg is not None:
                    a[neg] = -q
        b = _Q(rhs.numerator, rhs.denominator)
        flip = 1
        if sense == GE:
            a = [-v for v in a]
            b = -b
            flip = -1
        has_slack = sense != EQ
        slack_sign = 1
        if b < 0:
            a = [-v for v in a]
            b = -b
            flip = -flip
            slack_sign = -1
        canon.append([a, b, flip, has_slack, slack_sign])

    slack_col = [-1] * m
    next_col = ns
    for i, (_, _, _, has_slack, _) in enumerate(canon):
        if has_slack:
            slack_col[i] = next_col
            next_col += 1
    art_col = [-1] * m
    recorder = [-1] * m
    for i, (_, _, _, has_slack, slack_sign) in enumerate(canon):
        if has_slack and slack_sign > 0:
            recorder[i] = slack_col[i]
        else:
            art_col[i] = next_col
            recorder[i] = next_col
            next_col += 1
    width = next_col
    art_cols = frozenset(c for c in art_col if c >= 0)

    tableau = []
    for i, (a, b, _, has_slack, slack_sign) in enumerate(canon):
        row = a + [_ZERO] * (width - ns) + [b]
        if has_slack:
            row[slack_col[i]] = _Q(slack_sign)
        if art_col[i] >= 0:
            row[art_col[i]] = _Q(1)
        tableau.append(row)

    # starting basis: positive slack, else a unit structural column, else artificial
    basis = [-1] * m
    used = set()
    col_hits = [0] * ns
    col_row = [-1] * ns
    for i in range(m):
        for j in range(ns):
            if tableau[i][j]:
                col_hits[j] += 1
                col_row[j] = i
    needs_phase1 = False
    for i in range(m):
        if recorder[i] == slack_col[i]:
            basis[i] = slack_col[i]
            continue
        crash = -1
        for j in range(ns):
            if col_hits[j] == 1 and col_row[j] == i and j not in used and tableau[i][j] > 0:
                crash = j
                break
        if crash >= 0:
            used.add(crash)
            basis[i] = crash
            pv = tableau[i][crash]
            if pv != 1:
                inv = 1 / pv
                tableau[i] = [v * inv for v in tableau[i]]
        else:
            basis[i] = art_col[i]
            needs_phase1 = True

    def set_objective(costs) -> None:
        rho = list(costs) + [_ZERO]
        for i in range(m):
            cb = costs[basis[i]]
            if cb:
                row = tableau[i]
                rho = [a - cb * b for a, b in zip(rho, row)]
        if len(tableau) == m:
            tableau.append(rho)
        else:
            tableau[m] = rho

    if needs_phase1:
        phase1 = [_ZERO] * width
        for c in art_cols:
            phase1[c] = _Q(-1)
        set_objective(phase1)
        status, _ = _simplex(tableau, basis, art_cols, art_cols, False)
        if status != OPTIMAL:  # pragma: no cover - phase 1 is bounded above by 0
            raise CertificateError("phase 1 reported unbounded")
        if tableau[m][-1] != 0:  # max of -sum(artificials) below zero
            rho = tableau[m]
            farkas = [Fraction(0)] * m
            for i in range(m):
                yhat = phase1[recorder[i]] - rho[recorder[i]]
                v = -yhat * canon[i][2]
                farkas[i] = Fraction(int(v.numerator), int(v.denominator))
            return LPOutcome(status=INFEASIBLE, farkas=tuple(farkas))
        for i in range(m):
            if basis[i] in art_cols:
                for j in range(width):
                    if j not in art_cols and tableau[i][j] != 0:
                        _pivot(tableau, basis, i, j)
                        break
                # an all-zero row is redundant; its artificial stays basic at 0

    phase2 = list(col_cost) + [_ZERO] * (width - ns)
    set_objective(phase2)
    status, enter = _simplex(tableau, basis, art_cols, art_cols, True)

    def structural_point() -> list:
        xs = [_ZERO] * width
        for i in range(m):
            xs[basis[i]] = tableau[i][-1]
        point = []
        for pos, neg in var_cols:
            v = xs[pos]
            if neg is not None:
                v = v - xs[neg]
            point.append(v)
        return point

    if status == UNBOUNDED:
        direction = [_ZERO] * width
        direction[enter] = _Q(1)
        for i in range(m):
            a = tableau[i][enter]
            if a:
                direction[basis[i]] = -a
        ray = []
        for pos, neg in var_cols:
            v = direction[pos]
            if neg is not None:
                v = v - direction[neg]
            ray.append(v)
        return LPOutcome(
            status=UNBOUNDED,
            x=_fractions(structural_point()),
            ray=_fractions(ray),
        )

    rho = tableau[m]
    value = -rho[-1]
    duals = []
    for i in range(m):
        yhat = phase2[recorder[i]] - rho[recorder[i]]
        v = yhat * canon[i][2]
        if not maximize:
            v = -v
        duals.append(v)
    if not maximize:
        value = -value
    return LPOutcome(
        status=OPTIMAL,
        x=_fractions(structural_point()),
        y=_fractions(duals),
        value=Fraction(int(value.numerator), int(value.denominator)),
    )


def lp_solve(problem: LinearProgram) -> LPOutcome:
    """Solve ``problem`` and return a verified, certified outcome."""
    outcome = _solve(problem)
    outcome.verify(problem)
    return outcome


# ---------------------------------------------------------------------------
# convex hull membership


@dataclass(frozen=True)
class HullMembership:
    """Membership certificate for a point against a finite generator set.

    Inside: ``weights`` are convex coefficients reproducing the point.
    Outside: ``separator . g <= bound < separator . point`` for every
    generator g, with ``gap`` the exact slack of the strict inequality.
    """

    inside: bool
    weights: Optional[tuple[Fraction, ...]] = None
    separator: Optional[tuple[Fraction, ...]] = None
    bound: Optional[Fraction] = None
    gap: Optional[Fraction] = None

    def verify(self, point, generators) -> None:
        point = tuple(to_fraction(v) for v in point)
        gens = [tuple(to_fraction(v) for v in g) for g in generators]
        if self.inside:
            if self.weights is None or len(self.weights) != len(gens):
                raise CertificateError("weights missing or misshapen")
            if any(w < 0 for w in self.weights):
                raise CertificateError("negative convex weight")
            if sum(self.weights) != 1:
                raise CertificateError("weights do not sum to one")
            for k in range(len(point)):
                if sum(w * g[k] for w, g in zip(self.weights, gens)) != point[k]:
                    raise CertificateError("weights do not reproduce the point")
        else:
            if self.separator is None:
                raise CertificateError("separator missing")
            worst = max(_dot(self.separator, g) for g in gens)
            at_point = _dot(self.separator, point)
            if not (worst <= self.bound < at_point):
                raise CertificateError("separator does not strictly separate")
            if self.gap != at_point - worst:
                raise CertificateError("separation gap mismatch")


def in_convex_hull(point: Sequence, generators: Iterable[Sequence]) -> HullMembership:
    """Decide exactly whether ``point`` lies in the convex hull of ``generators``.

    The membership LP is solved over convex weights; a negative answer turns
    the Farkas certificate into a strictly separating linear functional.
    """
    gens = [tuple(to_fraction(v) for v in g) for g in generators]
    if not gens:
        raise ValueError("generator list is empty")
    target = tuple(to_fraction(v) for v in point)
    dim = len(target)
    for g in gens:
        if len(g) != dim:
            raise LPFormatError("generator dimension mismatch")
    rows = []
    for k in range(dim):
        rows.append((tuple(g[k] for g in gens), EQ, target[k]))
    rows.append((tuple(Fraction(1) for _ in gens), EQ, Fraction(1)))
    problem = linear_program(MAX, tuple(Fraction(0) for _ in gens), rows)
    outcome = lp_solve(problem)
    if outcome.status == OPTIMAL:
        result = HullMembership(inside=True, weights=outcome.x)
    else:
        y = outcome.farkas
        separator = y[:dim]
        bound = -y[dim]
        worst = max(_dot(separator, g) for g in gens)
        at_point = _dot(separator, target)
        result = HullMembership(
            inside=False,
            separator=separator,
            bound=bound,
            gap=at_point - worst,
        )
    result.verify(target, gens)
    return result
