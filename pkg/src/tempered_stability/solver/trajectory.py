"""
Solver configuration and trajectory container.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from ..config import DELAY_GRID_POLICIES, ToleranceProfile, get_default_config
from ..exceptions import ConfigurationError, StepDelayError

logger = logging.getLogger(__name__)


class SolverMethod(str, Enum):
    TEMPERED_PRODUCT_INTEGRATION = "tempered_product_integration"
    EXP_TRANSFORM_CAPUTO = "exp_transform_caputo"

    @classmethod
    def parse(cls, value: Union[str, "SolverMethod"]) -> "SolverMethod":
        """Accept enum values and the CLI names ``tempered`` / ``exp-transform``."""
        if isinstance(value, cls):
            return value
        aliases = {
            "tempered": cls.TEMPERED_PRODUCT_INTEGRATION,
            "exp-transform": cls.EXP_TRANSFORM_CAPUTO,
        }
        if value in aliases:
            return aliases[value]
        try:
            return cls(value)
        except ValueError as e:
            raise ConfigurationError(f"unknown solver method {value!r}") from e


@dataclass(frozen=True)
class SolverConfig:
    """Step, method and delay handling of one solve.

    Attributes:
        h: Requested time step
        method: Discretisation of the mild solution
        corrector_iterations: Corrector sweeps per step
        delay_grid_policy: ``require_divisible`` or ``auto_adjust_step``
        divisibility_rtol: Relative tolerance for tau/h being integral
        divergence_threshold: Infinity norm at which the solve aborts
    """

    h: float = 1e-3
    method: SolverMethod = SolverMethod.TEMPERED_PRODUCT_INTEGRATION
    corrector_iterations: int = 2
    delay_grid_policy: str = "auto_adjust_step"
    divisibility_rtol: float = 1e-9
    divergence_threshold: float = 1e12

    def __post_init__(self) -> None:
        object.__setattr__(self, "method", SolverMethod.parse(self.method))
        if not (math.isfinite(self.h) and self.h > 0):
            raise ConfigurationError(f"step must be positive, got {self.h}")
        if self.corrector_iterations < 1:
            raise ConfigurationError("corrector_iterations must be at least 1")
        if self.delay_grid_policy not in DELAY_GRID_POLICIES:
            raise ConfigurationError(
                f"delay_grid_policy must be one of {DELAY_GRID_POLICIES}"
            )

    @classmethod
    def from_profile(
        cls,
        profile: Optional[ToleranceProfile] = None,
        h: Optional[float] = None,
        method: Union[str, SolverMethod] = SolverMethod.TEMPERED_PRODUCT_INTEGRATION,
    ) -> "SolverConfig":
        """Solver settings taken from a tolerance profile.

        Args:
            profile: Tolerance profile (uses default if None)
            h: Step; ``profile.default_step`` if None
            method: Solver method
        """
        profile = profile or get_default_config()
        return cls(
            h=profile.default_step if h is None else float(h),
            method=SolverMethod.parse(method),
            corrector_iterations=profile.corrector_iterations,
            delay_grid_policy=profile.delay_grid_policy,
            divisibility_rtol=profile.divisibility_rtol,
            divergence_threshold=profile.divergence_threshold,
        )

    def resolve_step(self, tau: float) -> Tuple[float, int]:
        """Step actually used and the delay lag m = tau / h.

        Raises:
            StepDelayError: If tau/h is not integral under ``require_divisible``
        """
        ratio = tau / self.h
        nearest = round(ratio)
        divisible = nearest >= 1 and abs(ratio - nearest) <= self.divisibility_rtol * ratio

        if self.delay_grid_policy == "require_divisible":
            if not divisible:
                raise StepDelayError(
                    f"tau/h = {ratio:.12g} is not an integer (tau={tau}, h={self.h})"
                )
            return self.h, int(nearest)

        lag = int(nearest) if divisible else max(1, math.ceil(ratio))
        step = tau / lag
        if not math.isclose(step, self.h, rel_tol=1e-12):
            logger.info(f"Step adjusted from {self.h:g} to {step:.12g} so tau/h = {lag}")
        return step, lag


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Solver output on the uniform grid t_i = i h.

    Attributes:
        times: Grid times, shape (N + 1,)
        states: States y(t_i), shape (N + 1, n)
        norm_track: Infinity norm of each state
        method: Method that produced the trajectory
        h: Step used
        lag: Delay in steps (tau / h)
    """

    times: NDArray[np.float64]
    states: NDArray[np.float64]
    norm_track: NDArray[np.float64]
    method: SolverMethod
    h: float
    lag: int

    @classmethod
    def from_states(
        cls,
        times: NDArray[np.float64],
        states: NDArray[np.float64],
        method: SolverMethod,
        h: float,
        lag: int,
    ) -> "Trajectory":
        states = np.asarray(states, dtype=float)
        norm_track = np.max(np.abs(states), axis=1)
        for array in (times, states, norm_track):
            array.flags.writeable = False
        return cls(times, states, norm_track, method, h, lag)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def dimension(self) -> int:
        return self.states.shape[1]

    @property
    def max_norm(self) -> float:
        return float(np.max(self.norm_track))

    def to_frame(self) -> pd.DataFrame:
        """Table with columns t, y1..yn, norm_inf."""
        frame = pd.DataFrame(
            self.states, columns=[f"y{i + 1}" for i in range(self.dimension)]
        )
        frame.insert(0, "t", self.times)
        frame["norm_inf"] = self.norm_track
        return frame

    def to_csv(self, path: Union[str, Path]) -> Path:
        """Write the trajectory with 17 significant digits."""
        path = Path(path)
        self.to_frame().to_csv(path, index=False, float_format="%.17g")
        logger.debug(f"Wrote {len(self)} trajectory rows to {path}")
        return path
