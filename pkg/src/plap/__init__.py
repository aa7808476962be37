"""Positive radial solutions of p-Laplace Dirichlet problems on the unit ball."""
__version__ = "0.1.0"

from .curve import (
    SolutionCurve,
    classify_curve,
    detect_lambda0,
    trace_homotopy,
    trace_lambda_curve,
)
from .diagnostics import (
    HypothesisReport,
    a_posteriori_checks,
    check_hypotheses,
    one_dim_identities,
    qualitative_checks,
    tang_profiles,
)
from .errors import PlapError
from .ivp import integrate_linearized, integrate_radial
from .model import Autonomous1D, LinearTest, ModelAB, ProblemSpec, PureB
from .polynomial import Polynomial
from .shoot import RadialSolution, is_degenerate, solve_at_lambda, solve_autonomous_by_scaling, solve_from_boundary
from .timemap import time_map_lambda

__all__ = [
    "Autonomous1D",
    "HypothesisReport",
    "LinearTest",
    "ModelAB",
    "PlapError",
    "Polynomial",
    "ProblemSpec",
    "PureB",
    "RadialSolution",
    "SolutionCurve",
    "a_posteriori_checks",
    "check_hypotheses",
    "classify_curve",
    "detect_lambda0",
    "integrate_linearized",
    "integrate_radial",
    "is_degenerate",
    "one_dim_identities",
    "qualitative_checks",
    "solve_at_lambda",
    "solve_autonomous_by_scaling",
    "solve_from_boundary",
    "tang_profiles",
    "time_map_lambda",
    "trace_homotopy",
    "trace_lambda_curve",
]
