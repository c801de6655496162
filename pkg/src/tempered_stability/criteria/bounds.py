"""
Bound curves of the two finite-time-stability criteria.

    C1(t) = [(3^(1/a) q + (3^(1/a) Psi + q Phi + Psi Phi) e^((Psi+q) t)) / (q + Psi)]^(1/q)
    C2(t) = (1 + rate t^a / Gamma(a + 1)) E_a(rate t^a)
"""

import logging
import math
from typing import List, Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..exceptions import DomainError
from ..special_functions import MlEvalPolicy, gamma, mittag_leffler
from .audit import AuditNote, info
from .constants import DelayDependentConstants, DelayIndependentConstants

logger = logging.getLogger(__name__)


def c1_bound(
    t: Union[float, ArrayLike],
    k: DelayDependentConstants,
    overflow_exponent: float = 700.0,
    audit: Optional[List[AuditNote]] = None,
) -> Union[float, NDArray[np.float64]]:
    """Delay-dependent bound C1(t), evaluated in log space.

    Where the exponent (Psi + q) t exceeds ``overflow_exponent`` the bound is
    the +inf sentinel and one note is appended to ``audit``.

    Args:
        t: Time or array of times, t >= 0
        k: Delay-dependent constants (possibly with printed Psi, Phi)
        overflow_exponent: Natural-log guard on (Psi + q) t
        audit: Optional list receiving the overflow note

    Returns:
        C1 at ``t`` with the shape of ``t``
    """
    times = np.asarray(t, dtype=float)
    if np.any(times < 0):
        raise DomainError("c1_bound needs t >= 0")
    for name in ("Psi", "Phi", "q", "three_pow"):
        if not math.isfinite(getattr(k, name)) or getattr(k, name) < 0:
            raise DomainError(f"{name} must be finite and nonnegative, got {getattr(k, name)}")

    exponent = k.rate * times
    overflow = exponent > overflow_exponent
    growth = k.three_pow * k.Psi + k.q * k.Phi + k.Psi * k.Phi
    with np.errstate(divide="ignore"):
        log_numerator = np.logaddexp(
            math.log(k.three_pow * k.q), np.log(growth) + exponent
        )
    bound = np.exp((log_numerator - math.log(k.q + k.Psi)) / k.q)
    bound = np.where(overflow, math.inf, bound)

    if np.any(overflow):
        first = float(times[overflow].min()) if times.ndim else float(times)
        message = (
            f"(Psi+q)t exceeds {overflow_exponent:g} from t={first:.6g}; "
            f"bound reported as +inf"
        )
        logger.warning(f"C1 overflow: {message}")
        if audit is not None:
            audit.append(info("C1 overflow", message))

    return float(bound) if bound.ndim == 0 else bound


def c2_bound(
    t: float,
    k: DelayIndependentConstants,
    alpha: float,
    policy: Optional[MlEvalPolicy] = None,
) -> float:
    """Delay-independent bound C2(t) at a single time.

    Example:
        >>> c2_bound(0.0, DelayIndependentConstants(0.3, 0.36), 0.5)
        1.0
    """
    if t < 0:
        raise DomainError(f"c2_bound needs t >= 0, got {t}")
    if k.rate < 0:
        raise DomainError(f"rate must be nonnegative, got {k.rate}")
    argument = k.rate * t**alpha
    linear = 1.0 + argument / gamma(alpha + 1.0)
    return linear * mittag_leffler(alpha, argument, policy)


def c2_curve(
    times: ArrayLike,
    k: DelayIndependentConstants,
    alpha: float,
    policy: Optional[MlEvalPolicy] = None,
) -> NDArray[np.float64]:
    """C2 at every time in ``times``."""
    return np.array([c2_bound(float(t), k, alpha, policy) for t in np.ravel(times)])


def c2_printed_curve(
    times: ArrayLike,
    coefficient: float,
    rate: float,
    alpha: float,
    policy: Optional[MlEvalPolicy] = None,
) -> NDArray[np.float64]:
    """(1 + coefficient t^a) E_a(rate t^a) with a published coefficient.

    The formula curve derives the coefficient as rate / Gamma(a + 1); this
    variant takes it verbatim so a printed curve can be redrawn as printed.
    """
    if coefficient < 0 or rate < 0:
        raise DomainError("printed C2 coefficient and rate must be nonnegative")
    out = []
    for t in np.ravel(np.asarray(times, dtype=float)):
        if t < 0:
            raise DomainError(f"C2 needs t >= 0, got {t}")
        power = t**alpha
        out.append((1.0 + coefficient * power) * mittag_leffler(alpha, rate * power, policy))
    return np.array(out)
