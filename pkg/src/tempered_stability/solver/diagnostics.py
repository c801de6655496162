"""
Cross-validation, residuals, convergence order and bound verification
for solver trajectories.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from ..config import ToleranceProfile, get_default_config
from ..criteria.bounds import c2_curve
from ..criteria.evaluate import Criterion, CriterionReport
from ..exceptions import ConfigurationError
from ..model.system import StabilityQuery, SystemSpec
from ..operators.tempered import SampledFunction, tempered_derivative
from .methods import solve
from .trajectory import SolverConfig, SolverMethod, Trajectory

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CrossValidationReport:
    """Pointwise comparison of the two solver methods at one step."""

    max_discrepancy: float
    index: int
    time: float
    h: float


def cross_validate(
    spec: SystemSpec, cfg: Optional[SolverConfig] = None
) -> CrossValidationReport:
    """Run both methods at the same step and report their largest gap.

    Returns:
        CrossValidationReport with the max infinity-norm difference
    """
    cfg = cfg or SolverConfig.from_profile()
    first = solve(spec, replace(cfg, method=SolverMethod.TEMPERED_PRODUCT_INTEGRATION))
    second = solve(spec, replace(cfg, method=SolverMethod.EXP_TRANSFORM_CAPUTO))

    gaps = np.max(np.abs(first.states - second.states), axis=1)
    index = int(np.argmax(gaps))
    report = CrossValidationReport(
        max_discrepancy=float(gaps[index]),
        index=index,
        time=float(first.times[index]),
        h=first.h,
    )
    logger.info(
        f"Cross-validation at h={report.h:g}: max discrepancy {report.max_discrepancy:.3e} "
        f"at t={report.time:.6g}"
    )
    return report


@dataclass(frozen=True)
class ResidualReport:
    """Residual of the differential form along a trajectory."""

    max_residual: float
    index: int
    time: float
    first_index: int


def _delayed_states(traj: Trajectory, spec: SystemSpec) -> NDArray[np.float64]:
    delayed = np.empty_like(traj.states)
    for n in range(len(traj)):
        if n - traj.lag >= 0:
            delayed[n] = traj.states[n - traj.lag]
        else:
            delayed[n] = spec.history(traj.times[n] - spec.tau)
    return delayed


def residual_check(
    traj: Trajectory, spec: SystemSpec, warmup_fraction: float = 0.02
) -> ResidualReport:
    """Residual of TD^{alpha,rho} y = e^{-rho t}(A y + B y_tau + f) on the grid.

    The derivative samples y' are reconstructed from the computed states by
    second-order finite differences; the tempered derivative is then taken
    with ``tempered_derivative``. Interior nodes with t below
    ``warmup_fraction * T`` are skipped: there y' carries the t^(alpha-1)
    singularity of the solution, which no grid derivative resolves.

    Returns:
        ResidualReport with the max infinity-norm residual
    """
    if len(traj) < 3:
        return ResidualReport(0.0, 0, 0.0, 0)

    derivative = np.gradient(traj.states, traj.h, axis=0, edge_order=2)
    sampled = SampledFunction(0.0, traj.h, traj.states, derivative)
    delayed = _delayed_states(traj, spec)
    A = spec.A.as_array()
    B = spec.B.as_array()

    start = max(1, math.ceil(warmup_fraction * spec.horizon / traj.h))
    last = len(traj) - 2
    best, best_index = 0.0, start
    for n in range(start, last + 1):
        t = float(traj.times[n])
        y = traj.states[n]
        rhs = math.exp(-spec.rho * t) * (
            A @ y + B @ delayed[n] + spec.nonlinearity(t, y, delayed[n])
        )
        residual = float(np.max(np.abs(tempered_derivative(sampled, spec.order, n) - rhs)))
        if residual > best:
            best, best_index = residual, n

    logger.info(f"Max residual {best:.3e} at t={traj.times[best_index]:.6g}")
    return ResidualReport(
        max_residual=best,
        index=best_index,
        time=float(traj.times[best_index]),
        first_index=start,
    )


@dataclass(frozen=True)
class ConvergenceReport:
    """Observed convergence of a solver under step halving.

    ``order`` is None when every error is zero (``exact``).
    """

    steps: Tuple[float, ...]
    errors: Tuple[float, ...]
    order: Optional[float]
    exact: bool
    monotone: bool

    @property
    def label(self) -> str:
        return "exact" if self.exact else f"{self.order:.4f}"


def empirical_order(
    spec: SystemSpec,
    h_sequence: Sequence[float],
    cfg: Optional[SolverConfig] = None,
) -> ConvergenceReport:
    """Least-squares slope of log error against log h.

    Errors are measured against the finest step as reference, as the max
    infinity-norm difference over the common grid points in [T/2, T].

    Args:
        spec: System specification
        h_sequence: At least four steps, each an integer multiple of the next
        cfg: Solver configuration (its ``h`` is ignored)

    Returns:
        ConvergenceReport

    Raises:
        ConfigurationError: If fewer than three halvings are given or the
            grids are not nested
    """
    steps = sorted((float(h) for h in h_sequence), reverse=True)
    if len(steps) < 4:
        raise ConfigurationError("empirical_order needs at least three halving steps")
    cfg = cfg or SolverConfig.from_profile()
    runs = [solve(spec, replace(cfg, h=h)) for h in steps]
    reference = runs[-1]

    errors: List[float] = []
    for run in runs[:-1]:
        stride = int(round(run.h / reference.h))
        if stride < 1 or not math.isclose(stride * reference.h, run.h, rel_tol=1e-9):
            raise ConfigurationError(
                f"grids are not nested: h={run.h:g} vs reference h={reference.h:g}"
            )
        count = min(len(run), (len(reference) - 1) // stride + 1)
        fine = reference.states[::stride][:count]
        coarse = run.states[:count]
        window = run.times[:count] >= 0.5 * spec.horizon
        errors.append(float(np.max(np.abs(coarse[window] - fine[window]))))

    used = tuple(run.h for run in runs[:-1])
    monotone = all(b <= a for a, b in zip(errors, errors[1:]))
    if not monotone:
        logger.warning(f"Errors do not decrease monotonically under refinement: {errors}")

    positive = [(h, e) for h, e in zip(used, errors) if e > 0]
    if not positive:
        return ConvergenceReport(used, tuple(errors), None, True, monotone)
    if len(positive) < 2:
        raise ConfigurationError("too few nonzero errors to fit an order")

    log_h, log_e = np.log([p[0] for p in positive]), np.log([p[1] for p in positive])
    order = float(np.polyfit(log_h, log_e, 1)[0])
    logger.info(f"Observed order {order:.4f} from errors {errors}")
    return ConvergenceReport(used, tuple(errors), order, False, monotone)


@dataclass(frozen=True)
class VerificationResult:
    """Outcome of checking a trajectory against a criterion report.

    Attributes:
        passed: True if every applicable check held (vacuously when none applied)
        hypothesis_met: ||omega||_C < xi
        epsilon_check: norm_track < epsilon (None if not applicable)
        bound_check: norm_track <= ||omega||_C C2(t) (None if not applicable)
        first_failure_index: First grid index that failed a check
        notes: Explanations, one per skipped or failed check
    """

    passed: bool
    hypothesis_met: bool
    epsilon_check: Optional[bool]
    bound_check: Optional[bool]
    first_failure_index: Optional[int] = None
    first_failure_time: Optional[float] = None
    notes: Tuple[str, ...] = field(default=())

    @property
    def contradiction(self) -> bool:
        """A check that the theory guarantees failed."""
        return self.first_failure_index is not None

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "hypothesis_met": self.hypothesis_met,
            "epsilon_check": self.epsilon_check,
            "bound_check": self.bound_check,
            "first_failure_index": self.first_failure_index,
            "first_failure_time": self.first_failure_time,
            "notes": list(self.notes),
        }


def verify_bound(
    traj: Trajectory,
    query: StabilityQuery,
    report: CriterionReport,
    config: Optional[ToleranceProfile] = None,
) -> VerificationResult:
    """Check a simulated trajectory against a criterion report.

    (i) If the verdict is finite_time_stable and ||omega||_C < xi, every
    norm must stay below epsilon. (ii) For the delay-independent criterion,
    norm_track[i] <= ||omega||_C C2(t_i) (1 + slack), the trajectory
    bound the criterion is built on.

    Returns:
        VerificationResult naming the first failing grid index
    """
    config = config or get_default_config()
    notes: List[str] = []
    failures: List[int] = []
    hypothesis_met = report.history_norm < query.xi

    epsilon_check = None
    if report.is_stable and hypothesis_met:
        bad = np.flatnonzero(traj.norm_track >= query.epsilon)
        epsilon_check = len(bad) == 0
        if not epsilon_check:
            failures.append(int(bad[0]))
            notes.append(
                f"norm {traj.norm_track[bad[0]]:.6g} >= epsilon={query.epsilon} "
                f"at index {bad[0]}"
            )
    elif not hypothesis_met:
        notes.append(
            f"hypothesis unmet: ||omega||_C={report.history_norm!r} is not below "
            f"xi={query.xi!r}"
        )
    else:
        notes.append("criterion inconclusive; epsilon check not applicable")

    bound_check = None
    if report.criterion is Criterion.DELAY_INDEPENDENT:
        envelope = (
            report.history_norm
            * c2_curve(traj.times, report.formula_constants, report.alpha, config.ml_policy)
            * (1.0 + config.verification_slack)
        )
        bad = np.flatnonzero(traj.norm_track > envelope)
        bound_check = len(bad) == 0
        if not bound_check:
            failures.append(int(bad[0]))
            notes.append(
                f"norm {traj.norm_track[bad[0]]:.6g} exceeds ||omega||_C C2(t) = "
                f"{envelope[bad[0]]:.6g} at index {bad[0]}"
            )

    first = min(failures) if failures else None
    passed = not failures
    if failures:
        logger.warning(f"Trajectory check failed first at index {first}")
    return VerificationResult(
        passed=passed,
        hypothesis_met=hypothesis_met,
        epsilon_check=epsilon_check,
        bound_check=bound_check,
        first_failure_index=first,
        first_failure_time=None if first is None else float(traj.times[first]),
        notes=tuple(notes),
    )
