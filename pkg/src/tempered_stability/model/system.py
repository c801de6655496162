"""
System and query types for tempered fractional delay systems

    TD^{alpha,rho} y(t) = e^{-rho t} (A y(t) + B y(t - tau) + f(t, y(t), y(t - tau)))
    y(t) = omega(t),  t in [-tau, 0]
"""

import logging
import math
from dataclasses import dataclass, fields
from typing import Dict, Optional

from ..exceptions import FieldDiagnostic, ValidationError
from ..operators.tempered import TemperedOrder
from ..special_functions import MatrixNxN
from .history import HistoryFunction, history_sup_norm
from .nonlinearity import Nonlinearity

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SystemSpec:
    """One tempered fractional delay system on the horizon [0, T]."""

    order: TemperedOrder
    tau: float
    horizon: float
    A: MatrixNxN
    B: MatrixNxN
    nonlinearity: Nonlinearity
    history: HistoryFunction

    def __post_init__(self) -> None:
        problems = []
        if not (math.isfinite(self.tau) and self.tau > 0):
            problems.append(FieldDiagnostic("tau", "must be a positive real"))
        if not (math.isfinite(self.horizon) and self.horizon > 0):
            problems.append(FieldDiagnostic("horizon", "must be a positive real"))
        if self.A.order != self.B.order:
            problems.append(
                FieldDiagnostic("B", f"order {self.B.order} differs from A order {self.A.order}")
            )
        if self.history.dimension != self.A.order:
            problems.append(
                FieldDiagnostic(
                    "history",
                    f"dimension {self.history.dimension} differs from matrix order "
                    f"{self.A.order}",
                )
            )
        if not problems:
            problems.extend(self.history.covers(self.tau))
        if problems:
            raise ValidationError("invalid system", problems)

        if self.delay_exceeds_horizon:
            logger.warning(
                f"tau={self.tau} >= T={self.horizon}: the delayed term only reads history"
            )

    @property
    def dimension(self) -> int:
        return self.A.order

    @property
    def alpha(self) -> float:
        return self.order.alpha

    @property
    def rho(self) -> float:
        return self.order.rho

    @property
    def lipschitz_constant(self) -> float:
        return self.nonlinearity.lipschitz_constant

    @property
    def is_homogeneous(self) -> bool:
        return self.nonlinearity.kind == "none"

    @property
    def delay_exceeds_horizon(self) -> bool:
        return self.tau >= self.horizon

    @property
    def history_norm(self) -> float:
        """||omega||_C over [-tau, 0]."""
        return history_sup_norm(self.history, self.tau)


@dataclass(frozen=True)
class StabilityQuery:
    """Finite-time-stability question {xi, epsilon, J = [0, J_end]}."""

    xi: float
    epsilon: float
    J_end: float

    def __post_init__(self) -> None:
        problems = []
        for name in ("xi", "epsilon", "J_end"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                label = "horizon" if name == "J_end" else f"query.{name}"
                problems.append(FieldDiagnostic(label, "must be a positive real"))
        if not problems and self.xi > self.epsilon:
            problems.append(
                FieldDiagnostic("query.xi", f"xi={self.xi} exceeds epsilon={self.epsilon}")
            )
        if problems:
            raise ValidationError("invalid stability query", problems)

    @property
    def threshold(self) -> float:
        """epsilon / xi, the level both bound curves are compared against."""
        return self.epsilon / self.xi


@dataclass(frozen=True)
class PrintedConstants:
    """Constants as published alongside a worked example.

    ``psi`` and ``phi`` override the formula-derived values in the
    delay-dependent criterion; the remaining fields are only audited.
    """

    psi: Optional[float] = None
    phi: Optional[float] = None
    q: Optional[float] = None
    c1_additive: Optional[float] = None
    c1_coefficient: Optional[float] = None
    c1_rate: Optional[float] = None
    c2_coefficient: Optional[float] = None
    c2_rate: Optional[float] = None
    lam_a: Optional[float] = None
    lam_b: Optional[float] = None
    lam_s: Optional[float] = None
    gamma_alpha_plus_one: Optional[float] = None

    def __post_init__(self) -> None:
        problems = [
            FieldDiagnostic(f"printed.{name}", "must be a finite real")
            for name, value in self.to_dict().items()
            if not math.isfinite(value)
        ]
        if (self.psi is None) != (self.phi is None):
            problems.append(FieldDiagnostic("printed.psi", "psi and phi go together"))
        if problems:
            raise ValidationError("invalid printed constants", problems)

    @property
    def overrides_psi_phi(self) -> bool:
        return self.psi is not None

    def to_dict(self) -> Dict[str, float]:
        """Non-null fields in declaration order."""
        return {
            f.name: getattr(self, f.name)
            for f in fields(self)
            if getattr(self, f.name) is not None
        }


@dataclass(frozen=True)
class SystemDocument:
    """Everything one configuration document describes."""

    spec: SystemSpec
    query: StabilityQuery
    printed: Optional[PrintedConstants] = None
    name: Optional[str] = None
