"""Exact arithmetic kernel: rationals, real quadratic surds, polynomial sign analysis."""
from .scalar import (
    ExactScalar,
    MixedFieldError,
    QuadraticSurd,
    approx,
    display,
    exact,
    parse_scalar,
    scalar_cmp,
    scalar_from_json,
    scalar_sign,
    scalar_to_json,
    sqrt_exact,
    surd,
)
from .poly import (
    IsolatedRoot,
    RatPoly,
    UnsupportedDegreeError,
    count_roots,
    isolate_roots,
    poly_gcd,
    sign_at,
    squarefree_factors,
    sturm_sequence,
)
from .solve import (
    AlgebraicInterval,
    intersect_unions,
    merge_union,
    rational_between,
    satisfies,
    simplest_between,
    solve_sign_system,
    union_contains,
)
