"""
Scalar special functions used by the operators, criteria and solvers.

Gamma, lower incomplete Gamma, the one-parameter Mittag-Leffler function
and the largest singular value of small dense matrices.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate, special

from .exceptions import (
    ConvergenceError,
    DomainError,
    SpecialFunctionOverflowError,
)

logger = logging.getLogger(__name__)

# exp() overflows past this natural-log argument
_LOG_MAX = math.log(np.finfo(float).max)

# z**(1/alpha) above which the exponential term swamps the algebraic tail
_ASYMPTOTIC_DOMINANCE = 30.0
_ASYMPTOTIC_REL_TOL = 1e-9

# the alternating series loses digits to cancellation below z = -1
_NEGATIVE_SERIES_RADIUS = 1.0
# exp(-v) underflows to zero past this v
_NEGATIVE_CUTOFF = 750.0

_JACOBI_MAX_SWEEPS = 60
_JACOBI_TOL = 1e-15


@dataclass(frozen=True)
class MlEvalPolicy:
    """Evaluation policy for the Mittag-Leffler function.

    Attributes:
        series_term_cap: Maximum number of power-series terms
        series_rel_tol: Stop once a term is below this fraction of the sum
        argument_switch: z above which the asymptotic branch is used
        asymptotic_terms: Maximum algebraic terms of the asymptotic branch
    """

    series_term_cap: int = 400
    series_rel_tol: float = 1e-12
    argument_switch: float = 10.0
    asymptotic_terms: int = 12

    def __post_init__(self) -> None:
        if self.series_term_cap < 50:
            raise DomainError("series_term_cap must be at least 50")
        if not 0 < self.series_rel_tol <= 1e-6:
            raise DomainError("series_rel_tol must lie in (0, 1e-6]")
        if self.argument_switch <= 0:
            raise DomainError("argument_switch must be positive")
        if self.asymptotic_terms < 1:
            raise DomainError("asymptotic_terms must be at least 1")


DEFAULT_ML_POLICY = MlEvalPolicy()


@dataclass(frozen=True)
class MatrixNxN:
    """Immutable real square matrix stored row-major.

    Attributes:
        entries: Rows of the matrix as tuples of floats
    """

    entries: Tuple[Tuple[float, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.entries)
        if n < 1:
            raise DomainError("matrix order must be at least 1")
        for i, row in enumerate(self.entries):
            if len(row) != n:
                raise DomainError(
                    f"matrix row {i} has {len(row)} entries, expected {n}"
                )
            if not all(math.isfinite(v) for v in row):
                raise DomainError(f"matrix row {i} has non-finite entries")

    @classmethod
    def from_rows(cls, rows: Union[ArrayLike, Sequence[Sequence[float]]]) -> "MatrixNxN":
        """Build a matrix from nested sequences or a 2-D array."""
        array = np.asarray(rows, dtype=float)
        if array.ndim != 2:
            raise DomainError(f"matrix must be 2-D, got shape {array.shape}")
        return cls(tuple(tuple(float(v) for v in row) for row in array))

    @classmethod
    def zeros(cls, n: int) -> "MatrixNxN":
        return cls.from_rows(np.zeros((n, n)))

    @classmethod
    def identity(cls, n: int) -> "MatrixNxN":
        return cls.from_rows(np.eye(n))

    @property
    def order(self) -> int:
        return len(self.entries)

    def as_array(self) -> NDArray[np.float64]:
        return np.array(self.entries, dtype=float)

    def to_rows(self) -> list:
        return [list(row) for row in self.entries]


def gamma(x: float) -> float:
    """Euler Gamma function on the positive real axis.

    Args:
        x: Positive argument

    Returns:
        Gamma(x)

    Raises:
        DomainError: If x <= 0 or x is not finite
        SpecialFunctionOverflowError: If the result is not representable

    Example:
        >>> round(gamma(1.5), 7)
        0.8862269
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0:
        raise DomainError(f"gamma requires a finite x > 0, got {x}")
    value = float(special.gamma(x))
    if not math.isfinite(value):
        raise SpecialFunctionOverflowError(f"gamma({x}) overflows")
    return value


def lower_incomplete_gamma(a: float, x: float) -> float:
    """Lower incomplete Gamma function gamma(a, x) = int_0^x e^-s s^(a-1) ds.

    Raises:
        DomainError: If a <= 0 or x < 0
    """
    a = float(a)
    x = float(x)
    if not math.isfinite(a) or a <= 0:
        raise DomainError(f"lower_incomplete_gamma requires a > 0, got {a}")
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"lower_incomplete_gamma requires x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    return float(special.gammainc(a, x)) * gamma(a)


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"Mittag-Leffler order must lie in (0, 1], got {alpha}")
    return alpha


def _ml_series(alpha: float, z: float, policy: MlEvalPolicy) -> float:
    """Power series sum_n z^n / Gamma(alpha n + 1) with compensated summation."""
    log_abs_z = math.log(abs(z))
    negative = z < 0
    terms = [1.0]
    running = 1.0
    small_in_a_row = 0

    for n in range(1, policy.series_term_cap + 1):
        log_term = n * log_abs_z - math.lgamma(alpha * n + 1.0)
        if log_term > _LOG_MAX:
            raise ConvergenceError(
                f"series term {n} overflows for alpha={alpha}, z={z}"
            )
        term = math.exp(log_term)
        if negative and n % 2 == 1:
            term = -term
        terms.append(term)
        running += term

        if abs(term) <= policy.series_rel_tol * abs(running):
            small_in_a_row += 1
            # two consecutive small terms guard against a lucky cancellation
            if small_in_a_row >= 2:
                return math.fsum(terms)
        else:
            small_in_a_row = 0

    raise ConvergenceError(
        f"Mittag-Leffler series did not converge in {policy.series_term_cap} "
        f"terms for alpha={alpha}, z={z}"
    )


def _ml_asymptotic(alpha: float, z: float, policy: MlEvalPolicy) -> float:
    """Asymptotic expansion for large positive z (0 < alpha < 1).

    E_a(z) ~ (1/a) exp(z^(1/a)) - sum_k z^-k / Gamma(1 - a k). The first
    omitted nonzero algebraic term bounds the truncation error.
    """

    def algebraic_term(k: int) -> float:
        # rgamma vanishes at the poles 1 - alpha*k in {0, -1, ...}
        return float(special.rgamma(1.0 - alpha * k)) * z ** (-k)

    algebraic = []
    k = 1
    while k <= policy.asymptotic_terms:
        term = algebraic_term(k)
        kept = [t for t in algebraic if t != 0.0]
        if kept and abs(term) > abs(kept[-1]):
            # divergent tail of the asymptotic series
            break
        algebraic.append(term)
        k += 1

    omitted = 0.0
    for extra in range(k, k + 3):
        omitted = abs(algebraic_term(extra))
        if omitted > 0.0:
            break

    exponent = z ** (1.0 / alpha)
    if exponent > _LOG_MAX + math.log(alpha):
        logger.debug(f"E_{alpha}({z}) overflows; returning +inf")
        return math.inf
    value = math.exp(exponent) / alpha - math.fsum(algebraic)

    if omitted / abs(value) > _ASYMPTOTIC_REL_TOL:
        raise ConvergenceError(
            f"asymptotic branch inaccurate for alpha={alpha}, z={z} "
            f"(first omitted term {omitted:.2e}, relative {omitted / abs(value):.2e})"
        )
    return value


def _ml_negative_integral(alpha: float, x: float) -> float:
    """E_alpha(-x) for x > 0 (0 < alpha < 1) from its integral representation.

    With v = r^alpha x,

        E_a(-x) = sin(pi a) / (pi a x) * int_0^inf exp(-v^(1/a))
                  / ((v/x)^2 + 2 (v/x) cos(pi a) + 1) dv,

    whose integrand is smooth and positive. The integral is cut where
    exp(-v^(1/a)) underflows.
    """
    cos_pa = math.cos(math.pi * alpha)
    upper = _NEGATIVE_CUTOFF**alpha

    def integrand(v: float) -> float:
        s = v / x
        return math.exp(-(v ** (1.0 / alpha))) / (s * s + 2.0 * s * cos_pa + 1.0)

    # exp(-v^(1/a)) drops steeply near v = 1; the denominator is smallest near v = x
    points = sorted({1.0} | ({x} if x < upper else set()))
    value, abserr = integrate.quad(
        integrand, 0.0, upper, points=points, epsabs=0.0, epsrel=1e-12, limit=200
    )
    if not value > 0 or abserr > _ASYMPTOTIC_REL_TOL * value:
        raise ConvergenceError(
            f"integral representation inaccurate for alpha={alpha}, z={-x} "
            f"(estimated error {abserr:.2e})"
        )
    return math.sin(math.pi * alpha) / (math.pi * alpha * x) * value


def mittag_leffler(
    alpha: float, z: float, policy: Optional[MlEvalPolicy] = None
) -> float:
    """One-parameter Mittag-Leffler function E_alpha(z) for real z.

    Positive arguments use the power series up to ``policy.argument_switch``
    and the exponential asymptotic expansion above it; a series that
    overflows or runs out of terms falls back to the asymptotic branch.
    Values beyond the floating-point range are returned as ``+inf``.
    Negative arguments use the series on [-1, 0) and the integral
    representation below -1, where the alternating series cancels.

    Args:
        alpha: Order in (0, 1]
        z: Real argument
        policy: Evaluation policy (defaults to ``DEFAULT_ML_POLICY``)

    Returns:
        E_alpha(z)

    Raises:
        DomainError: If alpha is outside (0, 1] or z is not finite
        ConvergenceError: If the selected branch misses its tolerance

    Example:
        >>> round(mittag_leffler(1.0, 1.0), 7)
        2.7182818
    """
    policy = policy or DEFAULT_ML_POLICY
    alpha = _check_alpha(alpha)
    z = float(z)
    if not math.isfinite(z):
        raise DomainError(f"Mittag-Leffler argument must be finite, got {z}")

    if z == 0.0:
        return 1.0
    if alpha == 1.0:
        try:
            return math.exp(z)
        except OverflowError:
            return math.inf

    if z < -_NEGATIVE_SERIES_RADIUS:
        return _ml_negative_integral(alpha, -z)
    if z < 0:
        return _ml_series(alpha, z, policy)

    if z > policy.argument_switch:
        return _ml_asymptotic(alpha, z, policy)

    try:
        return _ml_series(alpha, z, policy)
    except ConvergenceError as e:
        if z ** (1.0 / alpha) < _ASYMPTOTIC_DOMINANCE:
            raise
        logger.debug(f"{e}; switching to the asymptotic branch")
        return _ml_asymptotic(alpha, z, policy)


def max_singular_value(matrix: Union[MatrixNxN, ArrayLike]) -> float:
    """Largest singular value (spectral norm) of a small dense matrix.

    One-sided cyclic Jacobi: plane rotations orthogonalise the columns of
    M, which diagonalises M^T M; the singular values are the final
    column norms.

    Args:
        matrix: Square matrix (``MatrixNxN`` or array-like)

    Returns:
        Largest singular value

    Example:
        >>> max_singular_value([[3.0, -4.0], [0.0, 0.0]])
        5.0
    """
    if isinstance(matrix, MatrixNxN):
        u = matrix.as_array()
    else:
        u = MatrixNxN.from_rows(matrix).as_array()
    n = u.shape[1]

    for sweep in range(_JACOBI_MAX_SWEEPS):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                a = float(u[:, p] @ u[:, p])
                b = float(u[:, q] @ u[:, q])
                c = float(u[:, p] @ u[:, q])
                if a == 0.0 or b == 0.0:
                    continue
                coupling = abs(c) / math.sqrt(a * b)
                if coupling <= _JACOBI_TOL:
                    continue
                off = max(off, coupling)

                zeta = (b - a) / (2.0 * c)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta**2))
                cos = 1.0 / math.sqrt(1.0 + t**2)
                sin = cos * t
                col_p = u[:, p].copy()
                u[:, p] = cos * col_p - sin * u[:, q]
                u[:, q] = sin * col_p + cos * u[:, q]
        if off <= _JACOBI_TOL:
            logger.debug(f"Jacobi converged after {sweep + 1} sweep(s)")
            break

    return float(np.max(np.linalg.norm(u, axis=0)))


# lambda_max(A) in the criteria is the spectral norm
spectral_norm = max_singular_value
