"""
Abstract fractional predictor-corrector solver for delay systems.

Both concrete methods discretise the mild solution

    y(t) = e^{-rho t} omega(0) + TI^{alpha,rho}[ e^{-rho s} G(s) ](t),
    G(s) = A y(s) + B y(s - tau) + f(s, y(s), y(s - tau)),

with product-integration weights: a rectangle-rule predictor followed by
trapezoid-rule corrector sweeps. Subclasses choose the kernel and how the
integral is mapped back to the state.
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from ..exceptions import DivergenceError
from ..model.system import SystemSpec
from ..operators.weights import get_weights
from .trajectory import SolverConfig, SolverMethod, Trajectory

logger = logging.getLogger(__name__)


class PredictorCorrectorSolver(ABC):
    """Template for the delay solvers.

    ``solve`` owns the grid, the method-of-steps delay lookup, the
    predictor-corrector loop and the divergence sentinel; subclasses
    implement the three hooks below.

    Attributes:
        config: Solver configuration
    """

    method: SolverMethod

    def __init__(self, config: Optional[SolverConfig] = None):
        self.config = config or SolverConfig(method=self.method)

    @abstractmethod
    def _kernel_rate(self, spec: SystemSpec) -> float:
        """Tempering rate of the convolution kernel (rho or 0)."""
        pass

    @abstractmethod
    def _integrand(
        self, spec: SystemSpec, t: float, rhs: NDArray[np.float64]
    ) -> NDArray[np.float64]:
        """Quantity convolved with the kernel, given G(t)."""
        pass

    @abstractmethod
    def _assemble(
        self,
        spec: SystemSpec,
        t: float,
        omega0: NDArray[np.float64],
        integral: NDArray[np.float64],
    ) -> NDArray[np.float64]:
        """State y(t) from the convolution integral at t."""
        pass

    @staticmethod
    def _rhs(
        spec: SystemSpec,
        A: NDArray[np.float64],
        B: NDArray[np.float64],
        t: float,
        state: NDArray[np.float64],
        delayed: NDArray[np.float64],
    ) -> NDArray[np.float64]:
        return A @ state + B @ delayed + spec.nonlinearity(t, state, delayed)

    def solve(self, spec: SystemSpec) -> Trajectory:
        """Integrate ``spec`` over [0, T].

        Args:
            spec: System specification

        Returns:
            Trajectory on the grid t_i = i h covering [0, T]

        Raises:
            StepDelayError: If h and tau are incompatible under require_divisible
            DivergenceError: If a state is non-finite or exceeds the threshold
        """
        cfg = self.config
        h, lag = cfg.resolve_step(spec.tau)
        steps = max(1, math.ceil(spec.horizon / h - 1e-9))
        times = h * np.arange(steps + 1)
        logger.info(
            f"Solving with {self.method.value}: h={h:.6g}, steps={steps}, lag={lag}"
        )

        weights = get_weights(spec.alpha, self._kernel_rate(spec), h, steps)
        A = spec.A.as_array()
        B = spec.B.as_array()
        history = spec.history
        omega0 = history.at_zero

        states = np.zeros((steps + 1, spec.dimension))
        integrands = np.zeros_like(states)
        states[0] = omega0

        def delayed(n: int) -> NDArray[np.float64]:
            # method of steps: history before t = tau, stored grid afterwards
            if n - lag >= 0:
                return states[n - lag]
            return history(times[n] - spec.tau)

        integrands[0] = self._integrand(
            spec, 0.0, self._rhs(spec, A, B, 0.0, states[0], delayed(0))
        )

        for n in range(1, steps + 1):
            t = times[n]
            y_delayed = delayed(n)
            y = self._assemble(spec, t, omega0, weights.rectangle_sum(integrands, n))
            memory = weights.trapezoid_history(integrands, n)

            for _ in range(cfg.corrector_iterations):
                integrands[n] = self._integrand(spec, t, self._rhs(spec, A, B, t, y, y_delayed))
                y = self._assemble(spec, t, omega0, memory + weights.right[0] * integrands[n])

            norm = float(np.max(np.abs(y)))
            if not math.isfinite(norm) or norm > cfg.divergence_threshold:
                raise DivergenceError(
                    f"{self.method.value} diverged (norm {norm:.3g})", index=n, time=float(t)
                )
            states[n] = y
            integrands[n] = self._integrand(spec, t, self._rhs(spec, A, B, t, y, y_delayed))

        logger.debug(f"Finished {steps} steps, max norm {np.max(np.abs(states)):.6g}")
        return Trajectory.from_states(times, states, self.method, h, lag)
