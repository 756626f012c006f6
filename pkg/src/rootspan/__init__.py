"""Finite-section laboratory for quasi-nuclear operator norms, bilinear
traces, resolvent estimates, and root-vector completeness checks."""

__version__ = "0.1.0"

from .geometry import (
    BiorthogonalSystem,
    ExponentContext,
    OperatorFamily,
    PowerWeight,
    ap_constant,
    b_condition_constant,
    fourier_coefficients,
    pairing,
    r_bound_estimate,
    synthesize,
)
from .schatten import (
    NormBounds,
    OperatorMatrix,
    adjoint_norm_identity,
    approximation_numbers,
    basis_equivalence_check,
    lp_operator_norm_bounds,
    sigma_p_norm,
    weyl_check,
)
from .trace_ops import (
    AnalyticFunctionSpec,
    apply_function,
    quasinilpotent_trace,
    spectral_trace_check,
    trace_holder_check,
    trace_pair,
    trace_symmetry_check,
)
from .resolvent import (
    ArcConfiguration,
    RayScan,
    carleman_report,
    quasinilpotent_resolvent_report,
    ray_scan,
    regularized_determinant,
    resolvent,
    sector_condition_check,
)
from .rootspace import (
    CompletenessReport,
    SpectralDecomposition,
    completeness_verdict,
    riesz_projection,
    root_span_distance,
    spectral_decomposition,
    truncate_root_system,
)
from .bvp import (
    BoundaryFunctional,
    BvpProblem,
    InteriorTerm,
    bvp_spectral_report,
    characteristic_data,
    coercive_estimate_report,
    condition1_check,
    degenerate_transform,
    dirichlet_conditions,
    discrete_norm,
    discretize,
    embedding_snumbers,
    neumann_conditions,
    validate_problem,
)

__all__ = [
    "__version__",
    "AnalyticFunctionSpec",
    "ArcConfiguration",
    "BiorthogonalSystem",
    "BoundaryFunctional",
    "BvpProblem",
    "CompletenessReport",
    "ExponentContext",
    "InteriorTerm",
    "NormBounds",
    "OperatorFamily",
    "OperatorMatrix",
    "PowerWeight",
    "RayScan",
    "SpectralDecomposition",
    "adjoint_norm_identity",
    "ap_constant",
    "apply_function",
    "approximation_numbers",
    "b_condition_constant",
    "basis_equivalence_check",
    "bvp_spectral_report",
    "carleman_report",
    "characteristic_data",
    "coercive_estimate_report",
    "completeness_verdict",
    "condition1_check",
    "degenerate_transform",
    "dirichlet_conditions",
    "discrete_norm",
    "discretize",
    "embedding_snumbers",
    "fourier_coefficients",
    "lp_operator_norm_bounds",
    "neumann_conditions",
    "pairing",
    "quasinilpotent_resolvent_report",
    "quasinilpotent_trace",
    "r_bound_estimate",
    "ray_scan",
    "regularized_determinant",
    "resolvent",
    "riesz_projection",
    "root_span_distance",
    "sector_condition_check",
    "sigma_p_norm",
    "spectral_decomposition",
    "spectral_trace_check",
    "synthesize",
    "trace_holder_check",
    "trace_pair",
    "trace_symmetry_check",
    "truncate_root_system",
    "validate_problem",
    "weyl_check",
]
