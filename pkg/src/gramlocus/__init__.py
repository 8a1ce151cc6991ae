"""gramlocus: loci of norm combinations in real inner product spaces.

The library represents an inner product space by its Gram matrix, defines
loci as level sets of linear combinations of induced distances to focus
points, derives sign-condition certificates that bound the locus function
at composed points, transports loci from abstract bases (polynomials,
matrices) into coordinate space, and traces the resulting 2-D curves.
"""

from .certify import (
    Certificate,
    DeltaEstimates,
    audit_certificate,
    certify_add_members,
    certify_add_vector,
    certify_linear_combo,
    certify_multi_combo,
    composite_value,
    delta_estimates,
    multi_offset_norm_sq,
)
from .errors import LocusError
from .locus import (
    LocusSpec,
    alpha_sum,
    eval_g,
    is_alpha_sum_zero,
    is_member,
    residual,
    solve_on_ray,
    translate_foci,
)
from .spaces import GramSpace, identity_space, validate_gram
from .trace import Polyline, Window, emit_csv, emit_svg, render_png, trace_locus
from .transport import (
    BasisOracle,
    MatrixTraceOracle,
    PolyIntegralOracle,
    TableOracle,
    gauss_legendre_integral,
    gram_from_basis,
    legendre_nodes_weights,
    poly_coords,
    transport_locus,
)
from .triangle import (
    cosine_law_norm_sq,
    sine_law_ratios,
    sum_length_bounds,
    sum_length_sq,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "DeltaEstimates",
    "GramSpace",
    "LocusError",
    "LocusSpec",
    "Polyline",
    "Window",
    "BasisOracle",
    "MatrixTraceOracle",
    "PolyIntegralOracle",
    "TableOracle",
    "alpha_sum",
    "audit_certificate",
    "certify_add_members",
    "certify_add_vector",
    "certify_linear_combo",
    "certify_multi_combo",
    "composite_value",
    "cosine_law_norm_sq",
    "delta_estimates",
    "emit_csv",
    "emit_svg",
    "eval_g",
    "gauss_legendre_integral",
    "gram_from_basis",
    "identity_space",
    "is_alpha_sum_zero",
    "is_member",
    "legendre_nodes_weights",
    "multi_offset_norm_sq",
    "poly_coords",
    "render_png",
    "residual",
    "sine_law_ratios",
    "solve_on_ray",
    "sum_length_bounds",
    "sum_length_sq",
    "trace_locus",
    "translate_foci",
    "transport_locus",
    "validate_gram",
]
