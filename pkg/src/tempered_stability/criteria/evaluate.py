"""
Criterion evaluation, verdicts and reports.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from ..config import ToleranceProfile, get_default_config
from ..exceptions import ConfigurationError, FieldDiagnostic, ValidationError
from ..model.system import PrintedConstants, StabilityQuery, SystemSpec
from .audit import AuditNote, audit_printed_constants, info
from .bounds import c1_bound, c2_bound, c2_curve
from .constants import (
    DelayDependentConstants,
    DelayIndependentConstants,
    delay_dependent_constants,
    delay_independent_constants,
)

logger = logging.getLogger(__name__)

Constants = Union[DelayDependentConstants, DelayIndependentConstants]


class Criterion(str, Enum):
    DELAY_DEPENDENT = "delay_dependent"
    DELAY_INDEPENDENT = "delay_independent"

    @classmethod
    def parse(cls, value: Union[str, "Criterion"]) -> "Criterion":
        """Accept ``delay_dependent`` as well as the CLI spelling ``delay-dependent``."""
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).replace("-", "_"))
        except ValueError as e:
            raise ConfigurationError(f"unknown criterion {value!r}") from e


class Verdict(str, Enum):
    # never "unstable": a failed sufficient condition proves nothing
    FINITE_TIME_STABLE = "finite_time_stable"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, eq=False)
class CriterionReport:
    """Evaluated bound curve, constants, verdict and audit trail.

    ``constants`` are the ones the verdict was computed from (the printed
    Psi and Phi when an override was supplied); ``formula_constants`` are
    always the formula-derived set.
    """

    criterion: Criterion
    alpha: float
    constants: Constants
    formula_constants: Constants
    times: NDArray[np.float64]
    bounds: NDArray[np.float64]
    threshold: float
    verdict: Verdict
    xi: float
    epsilon: float
    horizon: float
    history_norm: float
    printed: Optional[PrintedConstants] = None
    audit: Tuple[AuditNote, ...] = field(default=())
    first_crossing: Optional[float] = None

    @property
    def uses_printed(self) -> bool:
        return self.constants is not self.formula_constants

    @property
    def curve(self) -> List[Tuple[float, float]]:
        return list(zip(self.times.tolist(), self.bounds.tolist()))

    @property
    def is_stable(self) -> bool:
        return self.verdict is Verdict.FINITE_TIME_STABLE

    @property
    def hypothesis_met(self) -> bool:
        """||omega||_C < xi for the configured history."""
        return self.history_norm < self.xi

    def to_frame(self) -> pd.DataFrame:
        """Curve as a table with columns t, bound, threshold."""
        return pd.DataFrame(
            {
                "t": self.times,
                "bound": self.bounds,
                "threshold": np.full(len(self.times), self.threshold),
            }
        )

    def to_dict(self, curve_csv_path: Optional[str] = None) -> dict:
        out = {
            "criterion": self.criterion.value,
            "verdict": self.verdict.value,
            "threshold": self.threshold,
            "xi": self.xi,
            "epsilon": self.epsilon,
            "horizon": self.horizon,
            "history_norm": self.history_norm,
            "uses_printed_constants": self.uses_printed,
            "constants": _constants_dict(self.constants, self.alpha),
            "formula_constants": _constants_dict(self.formula_constants, self.alpha),
            "printed_constants": None if self.printed is None else self.printed.to_dict(),
            "max_bound": float(np.max(self.bounds)),
            "bound_at_horizon": float(self.bounds[-1]),
            "first_crossing_time": self.first_crossing,
            "curve_csv_path": curve_csv_path,
            "audit": [note.to_dict() for note in self.audit],
        }
        return out


def _constants_dict(k: Constants, alpha: float) -> dict:
    if isinstance(k, DelayDependentConstants):
        return {
            "g": k.g,
            "q": k.q,
            "V": k.V,
            "Psi": k.Psi,
            "Phi": k.Phi,
            "three_pow": k.three_pow,
            "lam_A": k.lam_A,
            "lam_B": k.lam_B,
            "additive": k.additive,
            "coefficient": k.coefficient,
            "rate": k.rate,
        }
    return {
        "lam_S": k.lam_S,
        "rate": k.rate,
        "lam_A": k.lam_A,
        "lam_B": k.lam_B,
        "coefficient": k.coefficient(alpha),
    }


def first_crossing_time(
    bound_fn: Callable[[float], float],
    times: NDArray[np.float64],
    bounds: NDArray[np.float64],
    threshold: float,
    iterations: int = 60,
) -> Optional[float]:
    """Earliest time the nondecreasing curve exceeds ``threshold``.

    Located on the sampled grid, then refined by bisection between the last
    sample below the threshold and the first one above it.

    Returns:
        Crossing time, or None if the sampled curve never exceeds the threshold
    """
    above = np.flatnonzero(bounds > threshold)
    if len(above) == 0:
        return None
    idx = int(above[0])
    if idx == 0:
        return float(times[0])

    lo, hi = float(times[idx - 1]), float(times[idx])
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if bound_fn(mid) > threshold:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-15 * max(1.0, hi):
            break
    return hi


def evaluate_criterion(
    spec: SystemSpec,
    query: StabilityQuery,
    criterion: Union[str, Criterion],
    grid_points: Optional[int] = None,
    printed: Optional[PrintedConstants] = None,
    config: Optional[ToleranceProfile] = None,
) -> CriterionReport:
    """Sample a criterion's bound curve on [0, T] and render the verdict.

    The verdict is ``finite_time_stable`` iff the bound stays at or below
    epsilon/xi at every sample and at T. Printed Psi and Phi, when given,
    replace the formula values for the delay-dependent curve; both sets are
    kept in the report.

    Args:
        spec: System specification
        query: Stability question {xi, epsilon, J}
        criterion: Which criterion to evaluate
        grid_points: Curve samples (defaults to ``config.grid_points``)
        printed: Optional published constants (override and audit)
        config: Tolerance profile

    Returns:
        CriterionReport

    Raises:
        ConfigurationError: If grid_points < 2

    Example:
        >>> doc = load_example("example2")
        >>> evaluate_criterion(doc.spec, doc.query, "delay_independent").verdict.value
        'finite_time_stable'
    """
    config = config or get_default_config()
    criterion = Criterion.parse(criterion)
    grid_points = config.grid_points if grid_points is None else int(grid_points)
    if grid_points < 2:
        raise ConfigurationError(f"grid_points must be at least 2, got {grid_points}")

    times = np.linspace(0.0, query.J_end, grid_points)
    threshold = query.threshold
    audit: List[AuditNote] = []
    policy = config.ml_policy

    if criterion is Criterion.DELAY_DEPENDENT:
        formula = delay_dependent_constants(spec)
        constants = formula
        if printed is not None and printed.overrides_psi_phi:
            constants = formula.with_psi_phi(printed.psi, printed.phi)
            audit.append(
                info(
                    "constants",
                    f"verdict uses printed Psi={printed.psi!r}, Phi={printed.phi!r}",
                )
            )
        bounds = c1_bound(times, constants, config.overflow_exponent, audit)

        def bound_fn(t: float) -> float:
            return c1_bound(t, constants, config.overflow_exponent)

    else:
        formula = delay_independent_constants(spec)
        constants = formula
        bounds = c2_curve(times, constants, spec.alpha, policy)

        def bound_fn(t: float) -> float:
            return c2_bound(t, constants, spec.alpha, policy)

    if printed is not None:
        audit.extend(audit_printed_constants(spec, printed, criterion.value))

    finite = np.isfinite(bounds)
    stable = bool(np.all(finite) and np.all(bounds <= threshold) and bounds[-1] <= threshold)
    verdict = Verdict.FINITE_TIME_STABLE if stable else Verdict.INCONCLUSIVE

    history_norm = spec.history_norm
    if history_norm >= query.xi:
        audit.append(
            info(
                "hypothesis",
                f"||omega||_C={history_norm!r} is not below xi={query.xi!r}; "
                f"the verdict does not cover this history",
            )
        )

    crossing = None
    if not stable:
        crossing = first_crossing_time(bound_fn, times, bounds, threshold)

    logger.info(
        f"{criterion.value}: verdict={verdict.value}, threshold={threshold:g}, "
        f"max bound={float(np.max(bounds)):.6g}"
    )
    return CriterionReport(
        criterion=criterion,
        alpha=spec.alpha,
        constants=constants,
        formula_constants=formula,
        times=times,
        bounds=np.asarray(bounds, dtype=float),
        threshold=threshold,
        verdict=verdict,
        xi=query.xi,
        epsilon=query.epsilon,
        horizon=query.J_end,
        history_norm=history_norm,
        printed=printed,
        audit=tuple(audit),
        first_crossing=crossing,
    )


def homogeneous_criteria(
    spec: SystemSpec,
    query: StabilityQuery,
    criterion: Union[str, Criterion],
    grid_points: Optional[int] = None,
    printed: Optional[PrintedConstants] = None,
    config: Optional[ToleranceProfile] = None,
) -> CriterionReport:
    """Criteria for the homogeneous system (f = none, so L_f = 0).

    Same computation as ``evaluate_criterion``; with L_f = 0 the C2 rate
    reduces to lambda_S.

    Raises:
        ValidationError: If ``spec`` carries a nonlinearity
    """
    if not spec.is_homogeneous:
        raise ValidationError(
            "homogeneous criteria need f = none",
            [FieldDiagnostic("nonlinearity.kind", f"is {spec.nonlinearity.kind!r}")],
        )
    return evaluate_criterion(spec, query, criterion, grid_points, printed, config)
