"""Two-set feasibility via alternating reflect/project splitting.

The package builds traces of the splitting iteration x+ = x - P_A x + P_B(2
P_A x - x) for a catalog of exactly projectable sets, classifies how each
trace ends (finite-step arrival, linear tail, cycle, divergence), and ships a
scenario registry plus CSV/JSON/SVG reporting.
"""
from __future__ import annotations

from .analysis import (
    BoundSpec,
    RateFit,
    asymptotic_regularity,
    detect_cycle,
    estimate_linear_rate,
    friedrichs_cosine,
    line_cone_bound,
    line_ray_bound,
    theoretical_bound,
)
from .config import ConfigError, RunConfig, load_config, parse_config, parse_set
from .engine import (
    BestApprox,
    ClassifyOptions,
    ConvergenceReport,
    IterateOptions,
    Status,
    StepRecord,
    Trace,
    classify,
    dra_step,
    fixed_point_residual,
    iterate,
)
from .functions import ConvexFunction, LinearFn, LowerCapFn, QuadraticFn
from .linalg import (
    NumericalError,
    Tolerance,
    bracketed_root,
    orthonormal_basis,
    pseudoinverse,
)
from .output import emit_summary, emit_svg, emit_trace_csv
from .scenarios import (
    Expectation,
    Problem,
    RunResult,
    Scenario,
    Verdict,
    build,
    compare,
    get_scenario,
    list_scenarios,
    run,
)
from .sets import (
    AffineSubspace,
    Ball,
    BallIntersection,
    Cone2D,
    DisjointUnion,
    Epigraph,
    FiniteSet,
    Halfspace,
    Hyperplane,
    Orthant,
    Polyhedron,
    ProjectionResult,
    Ray2D,
    SetDescriptor,
    distance,
    membership,
    project,
    project_epigraph,
    reflect,
)

__version__ = "0.1.0"

__all__ = [
    "AffineSubspace",
    "Ball",
    "BallIntersection",
    "BestApprox",
    "BoundSpec",
    "ClassifyOptions",
    "Cone2D",
    "ConfigError",
    "ConvergenceReport",
    "ConvexFunction",
    "DisjointUnion",
    "Epigraph",
    "Expectation",
    "FiniteSet",
    "Halfspace",
    "Hyperplane",
    "IterateOptions",
    "LinearFn",
    "LowerCapFn",
    "NumericalError",
    "Orthant",
    "Polyhedron",
    "Problem",
    "ProjectionResult",
    "QuadraticFn",
    "RateFit",
    "Ray2D",
    "RunConfig",
    "RunResult",
    "Scenario",
    "SetDescriptor",
    "Status",
    "StepRecord",
    "Tolerance",
    "Trace",
    "Verdict",
    "asymptotic_regularity",
    "bracketed_root",
    "build",
    "classify",
    "compare",
    "detect_cycle",
    "distance",
    "dra_step",
    "emit_summary",
    "emit_svg",
    "emit_trace_csv",
    "estimate_linear_rate",
    "fixed_point_residual",
    "friedrichs_cosine",
    "get_scenario",
    "iterate",
    "line_cone_bound",
    "line_ray_bound",
    "list_scenarios",
    "load_config",
    "membership",
    "orthonormal_basis",
    "parse_config",
    "parse_set",
    "project",
    "project_epigraph",
    "pseudoinverse",
    "reflect",
    "run",
    "theoretical_bound",
]
