"""Minimal graphs over a spiraling immersion."""

from ._core import (
    DegenerateImmersion,
    Diverged,
    InvalidArgument,
    PreconditionViolation,
    SolverDomainError,
    apply_model_operator,
    blowup_ratio,
    embeddedness_margin,
    geometry_at,
    helicoid_errors,
    immersion_jet,
    invert_model_operator,
    mean_curvature_of_jet,
    minimal_graph_operator,
    report_json,
    solve,
    surface_residual,
)

__all__ = [
    "DegenerateImmersion",
    "Diverged",
    "InvalidArgument",
    "PreconditionViolation",
    "SolverDomainError",
    "apply_model_operator",
    "blowup_ratio",
    "embeddedness_margin",
    "geometry_at",
    "helicoid_errors",
    "immersion_jet",
    "invert_model_operator",
    "mean_curvature_of_jet",
    "minimal_graph_operator",
    "report_json",
    "solve",
    "surface_residual",
]
