"""
Finite-time stability toolkit for tempered fractional delay systems.

This package evaluates the delay-dependent (C1) and delay-independent (C2)
finite-time-stability criteria of systems

    TD^{alpha,rho} y(t) = e^{-rho t} (A y(t) + B y(t - tau) + f(t, y(t), y(t - tau)))

and integrates the systems themselves to check the criteria empirically.

Main Components:
    - special_functions: Gamma, Mittag-Leffler, largest singular value
    - operators: Tempered fractional integral/derivative and Gronwall bounds
    - model: System specifications, histories and JSON configuration documents
    - criteria: Bound curves, verdicts and the printed-constant audit
    - solver: Predictor-corrector delay solvers and trajectory diagnostics

Quick Start:
    >>> from src.tempered_stability import load_example, evaluate_criterion
    >>>
    >>> doc = load_example("example2")
    >>> report = evaluate_criterion(doc.spec, doc.query, "delay_independent")
    >>> print(report.verdict.value)
    finite_time_stable

Example with the Solver:
    >>> from src.tempered_stability import SolverConfig, solve, verify_bound
    >>>
    >>> traj = solve(doc.spec, SolverConfig(h=1e-3))
    >>> verify_bound(traj, doc.query, report).passed
    True

Command line:
    tfs reproduce example1 --out results/example1
"""

__version__ = "0.1.0"

import logging

# Configuration
from .config import ToleranceProfile, get_default_config, set_default_config

# Special functions
from .special_functions import (
    DEFAULT_ML_POLICY,
    MatrixNxN,
    MlEvalPolicy,
    gamma,
    lower_incomplete_gamma,
    max_singular_value,
    mittag_leffler,
    spectral_norm,
)

# Operators
from .operators import (
    SampledFunction,
    TemperedOrder,
    gronwall_bound,
    gronwall_series_bound,
    solve_gronwall_equality,
    tempered_derivative,
    tempered_integral,
)

# System model
from .model import (
    HistoryFunction,
    Nonlinearity,
    PrintedConstants,
    StabilityQuery,
    SystemDocument,
    SystemSpec,
    load_example,
    load_system,
    parse_system,
    serialize_system,
    validate_lipschitz,
)

# Criteria
from .criteria import (
    Criterion,
    CriterionReport,
    Verdict,
    audit_printed_constants,
    c1_bound,
    c2_bound,
    evaluate_criterion,
    homogeneous_criteria,
)

# Solver
from .solver import (
    SolverConfig,
    SolverMethod,
    Trajectory,
    cross_validate,
    empirical_order,
    residual_check,
    solve,
    verify_bound,
)

# Exceptions
from .exceptions import (
    ConfigurationError,
    DivergenceError,
    DomainError,
    GridError,
    ModelError,
    ParseError,
    SolverError,
    SpecialFunctionError,
    StepDelayError,
    TemperedStabilityError,
    ValidationError,
)

# Reports
from .report import RunManifest

__all__ = [
    # Version
    "__version__",
    # Configuration
    "ToleranceProfile",
    "get_default_config",
    "set_default_config",
    # Special functions
    "DEFAULT_ML_POLICY",
    "MatrixNxN",
    "MlEvalPolicy",
    "gamma",
    "lower_incomplete_gamma",
    "max_singular_value",
    "mittag_leffler",
    "spectral_norm",
    # Operators
    "SampledFunction",
    "TemperedOrder",
    "gronwall_bound",
    "gronwall_series_bound",
    "solve_gronwall_equality",
    "tempered_derivative",
    "tempered_integral",
    # System model
    "HistoryFunction",
    "Nonlinearity",
    "PrintedConstants",
    "StabilityQuery",
    "SystemDocument",
    "SystemSpec",
    "load_example",
    "load_system",
    "parse_system",
    "serialize_system",
    "validate_lipschitz",
    # Criteria
    "Criterion",
    "CriterionReport",
    "Verdict",
    "audit_printed_constants",
    "c1_bound",
    "c2_bound",
    "evaluate_criterion",
    "homogeneous_criteria",
    # Solver
    "SolverConfig",
    "SolverMethod",
    "Trajectory",
    "cross_validate",
    "empirical_order",
    "residual_check",
    "solve",
    "verify_bound",
    # Exceptions
    "ConfigurationError",
    "DivergenceError",
    "DomainError",
    "GridError",
    "ModelError",
    "ParseError",
    "SolverError",
    "SpecialFunctionError",
    "StepDelayError",
    "TemperedStabilityError",
    "ValidationError",
    # Reports
    "RunManifest",
]


# Configure logging
def _configure_logging(level: int = logging.INFO):
    """Configure package logging.

    Args:
        level: Logging level (default: INFO)
    """
    logger = logging.getLogger(__name__)

    # Only configure if not already configured
    if not logger.handlers:
        handler = logging.StreamHandler()
        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)
        logger.setLevel(level)
        logger.propagate = False


# Initialize default logging
_configure_logging()


# Package metadata
__author__ = "Tempered Stability Project"
__description__ = (
    "Finite-time stability criteria and delay solvers for tempered fractional systems"
)
__license__ = "MIT"
