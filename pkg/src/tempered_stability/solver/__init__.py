"""
Delay solvers for the mild solution and their diagnostics.
"""

from .base import PredictorCorrectorSolver
from .diagnostics import (
    ConvergenceReport,
    CrossValidationReport,
    ResidualReport,
    VerificationResult,
    cross_validate,
    empirical_order,
    residual_check,
    verify_bound,
)
from .methods import SOLVERS, ExpTransformCaputo, TemperedProductIntegration, get_solver, solve
from .trajectory import SolverConfig, SolverMethod, Trajectory

__all__ = [
    "PredictorCorrectorSolver",
    "ConvergenceReport",
    "CrossValidationReport",
    "ResidualReport",
    "VerificationResult",
    "cross_validate",
    "empirical_order",
    "residual_check",
    "verify_bound",
    "SOLVERS",
    "ExpTransformCaputo",
    "TemperedProductIntegration",
    "get_solver",
    "solve",
    "SolverConfig",
    "SolverMethod",
    "Trajectory",
]
