"""Exact computation in Lipschitz-free spaces over finite pointed metric spaces.

Norms, optimal representing measures on ordered pairs, the weighted
triangle cone and its quasi-order, extreme-point classification, and
dilation-induced isometries - all over exact rational arithmetic, with a
machine-checkable certificate attached to every answer.
"""

from .choquet import (
    PrecedenceCertificate,
    PrecedesResult,
    TriangleMove,
    diagonal_decompose,
    g_zero,
    in_cone_G,
    is_minimal,
    minimal_below,
    minimal_representation,
    precedes,
    precedes_via_cone_lp,
    tau_edge_function,
    triangle_moves,
)
from .deleeuw import (
    DeLeeuwMeasure,
    EdgeFunction,
    convex_integral,
    decompose,
    dirac,
    is_optimal,
    marginal,
    optimal_representation,
    phi,
    phi_adjoint,
    restrict,
    shadow,
    weight,
)
from .exactlp import (
    HullMembership,
    LinearProgram,
    LPOutcome,
    in_convex_hull,
    linear_program,
    lp_solve,
)
from .extremality import (
    BanachStoneReport,
    ExtremalityVerdict,
    classify_molecule,
    exposing_functional,
    extreme_points,
    verify_banach_stone,
    vertex_oracle,
)
from .freespace import (
    FreeElement,
    FreeNorm,
    PointFunction,
    delta,
    free_norm,
    lipschitz_norm,
    molecule,
    norm_value,
    pairing,
    pushforward,
    rebase,
    scale_metric,
    support,
    zero,
)
from .metricspace import (
    Dilation,
    FiniteMetricSpace,
    find_dilations,
    is_between,
    is_concave,
    validate,
)
from .rational import format_rational, to_fraction

__version__ = "0.1.0"
