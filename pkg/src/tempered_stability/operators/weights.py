"""
Product-integration weights for tempered fractional integrals.

The kernel e^(-rho u) u^(alpha-1) / Gamma(alpha) is integrated exactly
against piecewise-linear (trapezoid) and piecewise-constant (rectangle)
interpolants on a uniform grid. With rho = 0 the weights reduce to the
classical fractional Adams weights.
"""

import logging
import threading
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy import special

from ..exceptions import GridError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProductWeights:
    """Convolution weights for one (alpha, rho, h) triple.

    Index ``k`` refers to the lag interval u in [k h, (k+1) h], u = t - s.

    Attributes:
        alpha: Integration order (> 0)
        rho: Tempering rate (>= 0)
        h: Grid step
        rectangle: Kernel mass of each lag interval (rectangle rule)
        left: Trapezoid weight of the older node of each lag interval
        right: Trapezoid weight of the newer node of each lag interval
        interior: ``left[m-1] + right[m]`` for m >= 1 (``interior[0] = 0``)
    """

    alpha: float
    rho: float
    h: float
    rectangle: NDArray[np.float64]
    left: NDArray[np.float64]
    right: NDArray[np.float64]
    interior: NDArray[np.float64]

    @property
    def intervals(self) -> int:
        return len(self.rectangle)

    def trapezoid(self, values: NDArray[np.float64], n: int) -> NDArray[np.float64]:
        """Product-trapezoid integral at node ``n`` of samples ``values[0..n]``."""
        if n == 0:
            return np.zeros(values.shape[1:])
        out = self.right[0] * values[n] + self.left[n - 1] * values[0]
        if n > 1:
            out = out + self.interior[n - 1 : 0 : -1] @ values[1:n]
        return out

    def trapezoid_history(
        self, values: NDArray[np.float64], n: int
    ) -> NDArray[np.float64]:
        """Trapezoid integral at node ``n`` without the node-``n`` term."""
        if n == 0:
            return np.zeros(values.shape[1:])
        out = self.left[n - 1] * values[0]
        if n > 1:
            out = out + self.interior[n - 1 : 0 : -1] @ values[1:n]
        return out

    def rectangle_sum(self, values: NDArray[np.float64], n: int) -> NDArray[np.float64]:
        """Product-rectangle (left point) integral at node ``n``."""
        if n == 0:
            return np.zeros(values.shape[1:])
        return self.rectangle[n - 1 :: -1] @ values[:n]


def _regularized_increments(a: float, x: NDArray[np.float64]) -> NDArray[np.float64]:
    """P(a, x[k+1]) - P(a, x[k]) using the tail form where P is close to 1."""
    lower = special.gammainc(a, x)
    upper = special.gammaincc(a, x)
    use_upper = x[:-1] > a
    return np.where(use_upper, upper[:-1] - upper[1:], lower[1:] - lower[:-1])


def build_weights(alpha: float, rho: float, h: float, intervals: int) -> ProductWeights:
    """Compute product-integration weights for ``intervals`` lag intervals.

    Args:
        alpha: Integration order, alpha > 0
        rho: Tempering rate, rho >= 0
        h: Grid step, h > 0
        intervals: Number of lag intervals (grid length minus one)

    Returns:
        ProductWeights including the 1/Gamma(alpha) normalisation

    Raises:
        GridError: On a non-positive step or negative interval count
    """
    if h <= 0 or not np.isfinite(h):
        raise GridError(f"grid step must be positive, got {h}")
    if intervals < 0:
        raise GridError(f"interval count must be non-negative, got {intervals}")

    k = np.arange(intervals + 1, dtype=float)
    if rho == 0.0:
        # exact moments of u^(alpha-1) / Gamma(alpha)
        m0 = h**alpha * np.diff(k**alpha) / special.gamma(alpha + 1.0)
        m1 = alpha * h ** (alpha + 1.0) * np.diff(k ** (alpha + 1.0))
        m1 = m1 / special.gamma(alpha + 2.0)
    else:
        x = rho * h * k
        m0 = rho ** (-alpha) * _regularized_increments(alpha, x)
        m1 = alpha * rho ** (-alpha - 1.0) * _regularized_increments(alpha + 1.0, x)

    lags = k[:-1]
    left = (m1 - lags * h * m0) / h
    right = ((lags + 1.0) * h * m0 - m1) / h

    interior = np.zeros(intervals)
    if intervals > 1:
        interior[1:] = left[:-1] + right[1:]

    for arr in (m0, left, right, interior):
        arr.flags.writeable = False

    return ProductWeights(
        alpha=float(alpha),
        rho=float(rho),
        h=float(h),
        rectangle=m0,
        left=left,
        right=right,
        interior=interior,
    )


class WeightCache:
    """Read-mostly cache of weight tables keyed by (alpha, rho, h, intervals).

    Lookups are lock-free; inserts take a lock so concurrent callers
    never build the same table twice.
    """

    def __init__(self, max_entries: int = 64):
        if max_entries <= 0:
            raise ValueError("max_entries must be positive")
        self.max_entries = max_entries
        self._tables: Dict[Tuple[float, float, float, int], ProductWeights] = {}
        self._lock = threading.Lock()

    def get(self, alpha: float, rho: float, h: float, intervals: int) -> ProductWeights:
        key = (float(alpha), float(rho), float(h), int(intervals))
        table = self._tables.get(key)
        if table is not None:
            return table

        with self._lock:
            table = self._tables.get(key)
            if table is None:
                logger.debug(
                    f"Building weights alpha={alpha}, rho={rho}, h={h}, "
                    f"intervals={intervals}"
                )
                table = build_weights(alpha, rho, h, intervals)
                if len(self._tables) >= self.max_entries:
                    # drop the oldest insertion
                    self._tables.pop(next(iter(self._tables)))
                self._tables[key] = table
        return table

    def clear(self) -> None:
        with self._lock:
            self._tables.clear()

    def __len__(self) -> int:
        return len(self._tables)


_default_cache = WeightCache()


def get_weights(alpha: float, rho: float, h: float, intervals: int) -> ProductWeights:
    """Weights from the process-wide cache."""
    return _default_cache.get(alpha, rho, h, intervals)
