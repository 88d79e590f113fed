"""Varieties M_alpha in the tridisc and extremal 3-point Pick interpolation."""

from .cxcore import (
    DiscAutomorphism,
    MagicParams,
    caratheodory_tridisc,
    hyperbolic_distance,
    magic,
    mobius,
    nodal_coordinate,
)
from .errors import (
    ConvergenceError,
    DegenerateDataError,
    DomainError,
    SamplerStarvation,
    SingularityError,
    TridiscError,
)
from .variety import (
    AlphaTriple,
    TridiscAutomorphism,
    build_biholo,
    defining_residual,
    graph_z3,
    is_member,
    rotation_normalize,
    sample_variety,
    solve_base_point,
    triangle_check,
)
from .pick import (
    NodalData,
    PickProblem,
    build_interpolant,
    double_root_z3,
    eval_interpolant,
    nondegenerate,
    normalize_disc,
    trilinear_coeffs,
    uniqueness_quadratic,
    variety_from_nodes,
)
from .polyalg import MultiPoly
from .boundary import BoundaryClass, classify_point, closure_condition, sample_shilov

__version__ = "0.1.0"
