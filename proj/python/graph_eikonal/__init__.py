"""Nonlocal Eikonal equation solvers on weighted geometric graphs."""

from graph_eikonal._core import (
    BoundaryDataSpec,
    DomainSpec,
    EikError,
    GraphProblem,
    KernelProfile,
    KernelShape,
    PotentialSpec,
    SamplingConfig,
    Scheme,
    analytic_min_dist,
    build_graph,
    coverage_radius,
    distance_to_gamma,
    eval_scaled_kernel,
    hausdorff_distance,
    internal_gradient_norm,
    make_domain,
    max_stable_dt,
    normalization_constant,
    run_convergence_json,
    run_property_suite,
    sample_vertices,
    scale_parameter,
    solve,
    validate_profile,
)

__all__ = [
    "BoundaryDataSpec",
    "DomainSpec",
    "EikError",
    "GraphProblem",
    "KernelProfile",
    "KernelShape",
    "PotentialSpec",
    "SamplingConfig",
    "Scheme",
    "analytic_min_dist",
    "build_graph",
    "coverage_radius",
    "distance_to_gamma",
    "eval_scaled_kernel",
    "hausdorff_distance",
    "internal_gradient_norm",
    "make_domain",
    "max_stable_dt",
    "normalization_constant",
    "run_convergence_json",
    "run_property_suite",
    "sample_vertices",
    "scale_parameter",
    "solve",
    "validate_profile",
]
