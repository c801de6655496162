"""
Closed registry of delay nonlinearities and their Lipschitz validation.

Every member has the form

    f(t, y, y_tau) = c_state * shape_state(y) + c_delayed * shape_delayed(y_tau)

with 1-Lipschitz shapes (identity or elementwise sine), so f(t, 0, 0) = 0
holds by construction.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..exceptions import FieldDiagnostic, ValidationError

logger = logging.getLogger(__name__)

KINDS = ("none", "linear_combo")

SHAPES: Dict[str, Callable[[NDArray[np.float64]], NDArray[np.float64]]] = {
    "identity": lambda v: v,
    "sin_elementwise": np.sin,
}


@dataclass(frozen=True)
class Nonlinearity:
    """Nonlinear term f(t, y(t), y(t - tau)) of the delay system.

    Attributes:
        kind: ``none`` or ``linear_combo``
        c_state: Coefficient of the current-state shape
        c_delayed: Coefficient of the delayed-state shape
        shape_state: Shape applied to y(t)
        shape_delayed: Shape applied to y(t - tau)
        declared_lf: Declared Lipschitz constant L_f
    """

    kind: str = "none"
    c_state: float = 0.0
    c_delayed: float = 0.0
    shape_state: str = "identity"
    shape_delayed: str = "identity"
    declared_lf: float = 0.0

    def __post_init__(self) -> None:
        problems = []
        if self.kind not in KINDS:
            problems.append(FieldDiagnostic("nonlinearity.kind", f"must be one of {KINDS}"))
        for name in ("shape_state", "shape_delayed"):
            if getattr(self, name) not in SHAPES:
                problems.append(
                    FieldDiagnostic(f"nonlinearity.{name}", f"must be one of {tuple(SHAPES)}")
                )
        for name in ("c_state", "c_delayed", "declared_lf"):
            if not math.isfinite(getattr(self, name)):
                problems.append(FieldDiagnostic(f"nonlinearity.{name}", "must be finite"))
        if problems:
            raise ValidationError("invalid nonlinearity", problems)

        if self.declared_lf < 0:
            problems.append(FieldDiagnostic("nonlinearity.lf", "must be nonnegative"))
        if self.kind == "none":
            if self.declared_lf != 0:
                problems.append(
                    FieldDiagnostic("nonlinearity.lf", "must be 0 when kind is 'none'")
                )
            if self.c_state != 0 or self.c_delayed != 0:
                problems.append(
                    FieldDiagnostic(
                        "nonlinearity.c_state", "coefficients must be 0 when kind is 'none'"
                    )
                )
        elif self.declared_lf < self.structural_lipschitz:
            problems.append(
                FieldDiagnostic(
                    "nonlinearity.lf",
                    f"declared {self.declared_lf} is below max(|c_state|, |c_delayed|) "
                    f"= {self.structural_lipschitz}",
                )
            )
        if problems:
            raise ValidationError("invalid nonlinearity", problems)

    @classmethod
    def none(cls) -> "Nonlinearity":
        return cls()

    @property
    def structural_lipschitz(self) -> float:
        """Smallest L_f the coefficients allow (shapes are 1-Lipschitz)."""
        return max(abs(self.c_state), abs(self.c_delayed))

    @property
    def lipschitz_constant(self) -> float:
        return self.declared_lf

    def __call__(
        self, t: float, state: ArrayLike, delayed: ArrayLike
    ) -> NDArray[np.float64]:
        state = np.asarray(state, dtype=float)
        if self.kind == "none":
            return np.zeros_like(state)
        return self.c_state * SHAPES[self.shape_state](state) + self.c_delayed * SHAPES[
            self.shape_delayed
        ](np.asarray(delayed, dtype=float))


@dataclass(frozen=True)
class LipschitzReport:
    """Outcome of a Monte-Carlo Lipschitz check.

    A pass is evidence, not proof.
    """

    declared_lf: float
    max_quotient: float
    trials: int
    radius: float
    passed: bool


def validate_lipschitz(
    f: Nonlinearity,
    trials: int,
    radius: float,
    dimension: int = 2,
    seed: Optional[int] = 0,
) -> LipschitzReport:
    """Sample difference quotients of ``f`` inside a radius ball.

    The quotient is ||f(y, y_d) - f(z, z_d)|| / (||y - z|| + ||y_d - z_d||)
    in the infinity norm, matching the Lipschitz condition on f.

    Args:
        f: Nonlinearity to check
        trials: Number of random pairs
        radius: Sampling radius (infinity-norm ball)
        dimension: State dimension
        seed: Seed of the sampler

    Returns:
        LipschitzReport with the largest observed quotient

    Example:
        >>> f = Nonlinearity("linear_combo", 2.0, -3.0, "sin_elementwise", "sin_elementwise", 3.0)
        >>> validate_lipschitz(f, trials=500, radius=1.0).passed
        True
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if radius <= 0:
        raise ValueError("radius must be positive")

    rng = np.random.default_rng(seed)
    y, yd, z, zd = rng.uniform(-radius, radius, size=(4, trials, dimension))

    max_quotient = 0.0
    for i in range(trials):
        gap = np.max(np.abs(y[i] - z[i])) + np.max(np.abs(yd[i] - zd[i]))
        if gap == 0:
            continue
        diff = f(0.0, y[i], yd[i]) - f(0.0, z[i], zd[i])
        max_quotient = max(max_quotient, float(np.max(np.abs(diff))) / gap)

    passed = max_quotient <= f.declared_lf * (1.0 + 1e-12)
    if not passed:
        logger.warning(
            f"Observed Lipschitz quotient {max_quotient:.6g} exceeds declared "
            f"L_f={f.declared_lf}"
        )
    return LipschitzReport(
        declared_lf=f.declared_lf,
        max_quotient=max_quotient,
        trials=trials,
        radius=radius,
        passed=passed,
    )
