"""
Custom exceptions for the tempered stability package.

Provides a hierarchy of exceptions for the special functions, the
fractional operators, the system model, and the delay solvers.
"""

from dataclasses import dataclass
from typing import List, Optional


class TemperedStabilityError(Exception):
    """Base exception for all tempered stability errors.

    All custom exceptions in this package inherit from this base class.
    """

    pass


class SpecialFunctionError(TemperedStabilityError):
    """Error raised while evaluating a special function."""

    pass


class DomainError(SpecialFunctionError):
    """Argument outside the supported domain of a function.

    Example:
        >>> raise DomainError("gamma requires x > 0, got -1.0")
    """

    pass


class SpecialFunctionOverflowError(SpecialFunctionError):
    """Result exceeds the representable floating-point range.

    Example:
        >>> raise SpecialFunctionOverflowError("gamma(200.0) overflows")
    """

    pass


class ConvergenceError(SpecialFunctionError):
    """Neither evaluation branch met the requested tolerance.

    Raised by the Mittag-Leffler evaluator when the power series runs
    out of terms and the asymptotic expansion is not yet accurate.
    """

    pass


class GridError(TemperedStabilityError):
    """Invalid sampling grid or grid index.

    Example:
        >>> raise GridError("t_index 12 outside grid of length 10")
    """

    pass


class MissingDerivativeError(GridError):
    """Derivative samples are required but were not supplied."""

    pass


@dataclass(frozen=True)
class FieldDiagnostic:
    """One field-precise problem found in a configuration document.

    Attributes:
        field: Dotted path of the offending field (e.g. ``query.xi``)
        message: Human readable description
    """

    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.field}: {self.message}"


class ModelError(TemperedStabilityError):
    """Base class for system model errors carrying field diagnostics."""

    def __init__(
        self, message: str, diagnostics: Optional[List[FieldDiagnostic]] = None
    ):
        self.diagnostics = list(diagnostics or [])
        if self.diagnostics:
            details = "; ".join(str(d) for d in self.diagnostics)
            message = f"{message}: {details}"
        super().__init__(message)


class ParseError(ModelError):
    """Configuration document is malformed (syntax, types, missing keys).

    Example:
        >>> raise ParseError("invalid document", [FieldDiagnostic("alpha", "not a number")])
    """

    pass


class ValidationError(ModelError):
    """Configuration parsed but breaches a model invariant.

    Example:
        >>> raise ValidationError("invalid system", [FieldDiagnostic("query.xi", "xi > epsilon")])
    """

    pass


class SolverError(TemperedStabilityError):
    """Error raised by the delay solvers."""

    pass


class StepDelayError(SolverError):
    """Step size incompatible with the delay under ``require_divisible``."""

    pass


class DivergenceError(SolverError):
    """Solution became non-finite or exceeded the divergence threshold.

    Attributes:
        index: First grid index with a bad state
        time: Grid time of that index
    """

    def __init__(self, message: str, index: int, time: float):
        super().__init__(f"{message} (first bad index {index}, t={time:.6g})")
        self.index = index
        self.time = time


class ConfigurationError(TemperedStabilityError):
    """Invalid tolerance profile or command-line settings.

    Example:
        >>> raise ConfigurationError("grid_points must be at least 2")
    """

    pass
