"""Exact lifted descriptions and slack-matrix factorizations of cyclic polytopes.

Everything is exact: integers and fractions.Fraction throughout, no floats.
The headline objects are factorize(n, d), whose rank stays within
2 * (2*floor(log2(n-1)) + 2)**(d//2), and build_ef_2d(n), a lifted LP
description of the degree-2 polytope with at most 2*floor(log2(n-1)) + 2
inequalities.
"""

from .errors import DomainError, InternalError
from .exact_lp import (
    INFEASIBLE,
    MAX,
    MIN,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    LPResult,
    ReoptimizingSolver,
    certify,
    solve,
)
from .factorization import (
    NonnegFactorization,
    VerificationReport,
    column_select,
    construction_rank,
    even_rank_bound,
    factorize,
    factorize_2d,
    factorize_even,
    factorize_odd,
    hadamard_combine,
    rank_bound,
    size_bound_2d,
    trivial_factorization,
    verify,
)
from .geometry import (
    AffineMap,
    CyclicPolytope,
    FacetInequality,
    GaleSet,
    Interval,
    SlackMatrix,
    enumerate_facets,
    facet_count,
    facet_inequality,
    format_linear,
    gale_pair_partition,
    interval_shift_map,
    is_gale,
    slack_entry,
    slack_matrix,
    vertex,
)
from .lifting import (
    EfOptimizer,
    ExtendedFormulation,
    Polyhedron,
    build_ef_2d,
    ef_from_factorization,
    ef_to_json_dict,
    ef_to_text,
    factorization_from_ef,
    independent_equations,
    lift_objective,
    lift_vertex_2d,
)
from .rational import format_rational, parse_rational

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "CyclicPolytope",
    "DomainError",
    "EfOptimizer",
    "ExtendedFormulation",
    "FacetInequality",
    "GaleSet",
    "INFEASIBLE",
    "InternalError",
    "Interval",
    "LPResult",
    "LinearProgram",
    "MAX",
    "MIN",
    "NonnegFactorization",
    "OPTIMAL",
    "Polyhedron",
    "ReoptimizingSolver",
    "SlackMatrix",
    "UNBOUNDED",
    "VerificationReport",
    "build_ef_2d",
    "certify",
    "column_select",
    "construction_rank",
    "ef_from_factorization",
    "ef_to_json_dict",
    "ef_to_text",
    "enumerate_facets",
    "even_rank_bound",
    "facet_count",
    "facet_inequality",
    "factorization_from_ef",
    "factorize",
    "factorize_2d",
    "factorize_even",
    "factorize_odd",
    "format_linear",
    "format_rational",
    "gale_pair_partition",
    "hadamard_combine",
    "independent_equations",
    "interval_shift_map",
    "is_gale",
    "lift_objective",
    "lift_vertex_2d",
    "parse_rational",
    "rank_bound",
    "size_bound_2d",
    "slack_entry",
    "slack_matrix",
    "solve",
    "trivial_factorization",
    "verify",
    "vertex",
]
