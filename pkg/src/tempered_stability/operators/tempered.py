"""
Tempered fractional integral, Caputo tempered derivative and the tempered
Grönwall bound.

    TI^{a,r} v(t) = 1/Gamma(a) int_0^t e^{-r(t-s)} (t-s)^{a-1} v(s) ds
    TD^{a,r} v(t) = TI^{1-a,r} [r v + v'](t)
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..exceptions import DomainError, GridError, MissingDerivativeError
from ..special_functions import MlEvalPolicy, gamma, mittag_leffler
from .weights import get_weights

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TemperedOrder:
    """Fractional order and tempering rate.

    The default constructor enforces 0 < alpha < 1 and 0 < rho <= 1.
    ``TemperedOrder.relaxed`` accepts any alpha > 0 and rho >= 0
    (rho = 0 recovers the Riemann-Liouville / Caputo operators).
    """

    alpha: float
    rho: float
    relaxed_checks: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        alpha, rho = float(self.alpha), float(self.rho)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "rho", rho)
        if not (math.isfinite(alpha) and math.isfinite(rho)):
            raise DomainError("alpha and rho must be finite")
        if self.relaxed_checks:
            if alpha <= 0 or rho < 0:
                raise DomainError(f"relaxed order needs alpha > 0, rho >= 0; got {alpha}, {rho}")
        else:
            if not 0 < alpha < 1:
                raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
            if not 0 < rho <= 1:
                raise DomainError(f"rho must lie in (0, 1], got {rho}")

    @classmethod
    def relaxed(cls, alpha: float, rho: float) -> "TemperedOrder":
        return cls(alpha, rho, relaxed_checks=True)

    @property
    def complement(self) -> "TemperedOrder":
        """Order 1 - alpha with the same tempering (kernel of the derivative)."""
        return TemperedOrder.relaxed(1.0 - self.alpha, self.rho)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Vector-valued function sampled on a uniform grid t0, t0 + h, ...

    Attributes:
        t0: First sample time (lower terminal of the operators)
        h: Grid step
        values: Samples, shape (N + 1, d)
        derivative_values: Optional samples of the time derivative, same shape
    """

    t0: float
    h: float
    values: NDArray[np.float64]
    derivative_values: Optional[NDArray[np.float64]] = None

    def __post_init__(self) -> None:
        if not (self.h > 0 and math.isfinite(self.h)):
            raise GridError(f"grid step must be positive, got {self.h}")
        values = _as_samples(self.values, "values")
        object.__setattr__(self, "values", values)
        if self.derivative_values is not None:
            deriv = _as_samples(self.derivative_values, "derivative_values")
            if deriv.shape != values.shape:
                raise GridError(
                    f"derivative_values shape {deriv.shape} differs from "
                    f"values shape {values.shape}"
                )
            object.__setattr__(self, "derivative_values", deriv)

    @classmethod
    def from_callable(
        cls,
        func: Callable[[NDArray[np.float64]], ArrayLike],
        t_end: float,
        h: float,
        derivative: Optional[Callable[[NDArray[np.float64]], ArrayLike]] = None,
        t0: float = 0.0,
    ) -> "SampledFunction":
        """Sample ``func`` (vectorised over time) on [t0, t_end] with step h."""
        n = int(round((t_end - t0) / h))
        times = t0 + h * np.arange(n + 1)
        deriv = None if derivative is None else np.asarray(derivative(times), dtype=float)
        return cls(t0, h, np.asarray(func(times), dtype=float), deriv)

    @property
    def times(self) -> NDArray[np.float64]:
        return self.t0 + self.h * np.arange(len(self.values))

    def __len__(self) -> int:
        return len(self.values)


def _as_samples(raw: ArrayLike, name: str) -> NDArray[np.float64]:
    array = np.array(raw, dtype=float)
    if array.ndim == 1:
        array = array[:, None]
    if array.ndim != 2 or len(array) == 0:
        raise GridError(f"{name} must be a non-empty list of vectors")
    array.flags.writeable = False
    return array


def _check_index(f: SampledFunction, t_index: int) -> int:
    t_index = int(t_index)
    if not 0 <= t_index < len(f):
        raise GridError(f"t_index {t_index} outside grid of length {len(f)}")
    return t_index


def _integrate(
    values: NDArray[np.float64], alpha: float, rho: float, h: float, n: int
) -> NDArray[np.float64]:
    weights = get_weights(alpha, rho, h, len(values) - 1)
    return weights.trapezoid(values, n)


def tempered_integral(
    f: SampledFunction, order: TemperedOrder, t_index: int
) -> NDArray[np.float64]:
    """Tempered fractional integral TI^{alpha,rho} f at grid node ``t_index``.

    Product-trapezoid rule: the kernel is integrated exactly against the
    piecewise-linear interpolant of the samples.

    Args:
        f: Sampled integrand
        order: Fractional order and tempering rate
        t_index: Grid index at which to evaluate

    Returns:
        Integral vector of dimension d

    Example:
        >>> one = SampledFunction(0.0, 0.01, np.ones(101))
        >>> value = tempered_integral(one, TemperedOrder(0.5, 0.5), 100)
    """
    n = _check_index(f, t_index)
    return _integrate(f.values, order.alpha, order.rho, f.h, n)


def tempered_integral_path(
    f: SampledFunction, order: TemperedOrder
) -> NDArray[np.float64]:
    """Tempered integral at every grid node, shape (N + 1, d)."""
    weights = get_weights(order.alpha, order.rho, f.h, len(f) - 1)
    return np.array([weights.trapezoid(f.values, n) for n in range(len(f))])


def tempered_derivative(
    f: SampledFunction, order: TemperedOrder, t_index: int
) -> NDArray[np.float64]:
    """Caputo tempered derivative TD^{alpha,rho} f at grid node ``t_index``.

    Evaluated as TI^{1-alpha,rho} applied to rho f + f', with f' taken
    from the caller-supplied ``derivative_values``.

    Raises:
        MissingDerivativeError: If ``f`` has no derivative samples
        GridError: If ``t_index`` is 0 or outside the grid
    """
    if f.derivative_values is None:
        raise MissingDerivativeError("tempered_derivative needs derivative_values")
    n = _check_index(f, t_index)
    if n < 1:
        raise GridError("tempered_derivative needs t_index >= 1")
    integrand = order.rho * f.values + f.derivative_values
    kernel = order.complement
    return _integrate(integrand, kernel.alpha, kernel.rho, f.h, n)


def gronwall_bound(
    f_nondecreasing: Callable[[float], float],
    h_const: float,
    order: TemperedOrder,
    t: float,
    policy: Optional[MlEvalPolicy] = None,
) -> float:
    """Mittag-Leffler form of the tempered Grönwall inequality.

    If g(t) <= f(t) + h int_0^t e^{-rho(t-s)} (t-s)^{alpha-1} g(s) ds with
    f nondecreasing, then g(t) <= f(t) E_alpha(h Gamma(alpha) t^alpha).

    Args:
        f_nondecreasing: Nondecreasing scalar function (caller asserts this)
        h_const: Nonnegative constant multiplying the integral
        order: Fractional order and tempering rate
        t: Evaluation time, t >= 0
        policy: Mittag-Leffler evaluation policy

    Returns:
        f(t) E_alpha(h Gamma(alpha) t^alpha)
    """
    if h_const < 0:
        raise DomainError(f"h_const must be nonnegative, got {h_const}")
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    argument = h_const * gamma(order.alpha) * t**order.alpha
    return float(f_nondecreasing(t)) * mittag_leffler(order.alpha, argument, policy)


def solve_gronwall_equality(
    f: SampledFunction, h_const: float, order: TemperedOrder
) -> NDArray[np.float64]:
    """Solve g = f + h int_0^t e^{-rho(t-s)} (t-s)^{alpha-1} g(s) ds.

    Implicit product-trapezoid scheme; returns g at every node, same
    shape as ``f.values``.
    """
    if h_const < 0:
        raise DomainError(f"h_const must be nonnegative, got {h_const}")
    weights = get_weights(order.alpha, order.rho, f.h, len(f) - 1)
    scale = h_const * gamma(order.alpha)
    g = np.zeros_like(f.values)
    g[0] = f.values[0]
    if len(f) > 1:
        denominator = 1.0 - scale * weights.right[0]
        if denominator <= 0:
            raise GridError(f"step {f.h} too coarse for h_const={h_const}")
        for n in range(1, len(f)):
            g[n] = (f.values[n] + scale * weights.trapezoid_history(g, n)) / denominator
    return g


def gronwall_series_bound(
    f: SampledFunction,
    h_const: float,
    order: TemperedOrder,
    max_terms: int = 200,
    rel_tol: float = 1e-12,
) -> NDArray[np.float64]:
    """General tempered Grönwall bound for a (not necessarily monotone) f.

    f(t) + sum_{n>=1} (h Gamma(alpha))^n TI^{n alpha, rho} f(t), summed
    until the next term is below ``rel_tol`` of the running bound at every
    node.

    Returns:
        Bound at every node, same shape as ``f.values``
    """
    if h_const < 0:
        raise DomainError(f"h_const must be nonnegative, got {h_const}")
    bound = np.array(f.values, dtype=float)
    if h_const == 0 or len(f) == 1:
        return bound

    factor = h_const * gamma(order.alpha)
    for n in range(1, max_terms + 1):
        term_order = TemperedOrder.relaxed(n * order.alpha, order.rho)
        term = factor**n * tempered_integral_path(f, term_order)
        bound = bound + term
        if np.all(np.abs(term) <= rel_tol * np.maximum(np.abs(bound), 1e-300)):
            logger.debug(f"Grönwall series converged after {n} terms")
            return bound

    logger.warning(f"Grönwall series truncated at {max_terms} terms")
    return bound
