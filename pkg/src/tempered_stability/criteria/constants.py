"""
Derived constants of the delay-dependent and delay-independent criteria.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from ..exceptions import DomainError
from ..model.system import PrintedConstants, SystemSpec
from ..special_functions import gamma, max_singular_value
from .audit import AuditNote, compare

logger = logging.getLogger(__name__)


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def holder_exponents(alpha: float) -> Tuple[float, float]:
    """Conjugate Hölder exponents g = 1 + alpha and q = 1 + 1/alpha.

    Example:
        >>> holder_exponents(0.5)
        (1.5, 3.0)
    """
    alpha = _check_alpha(alpha)
    return 1.0 + alpha, 1.0 + 1.0 / alpha


def compute_V(alpha: float) -> float:
    """V = (Gamma(alpha^2) / g^(alpha^2))^(1/g) with g = 1 + alpha."""
    g, _ = holder_exponents(alpha)
    a2 = alpha * alpha
    return (gamma(a2) / g**a2) ** (1.0 / g)


@dataclass(frozen=True)
class DelayDependentConstants:
    """Constants of the delay-dependent bound curve C1."""

    g: float
    q: float
    V: float
    Psi: float
    Phi: float
    three_pow: float
    lam_A: float
    lam_B: float

    @property
    def additive(self) -> float:
        """Constant term of C1(t)^q."""
        return self.three_pow * self.q / (self.q + self.Psi)

    @property
    def coefficient(self) -> float:
        """Coefficient of the exponential in C1(t)^q."""
        return (
            self.three_pow * self.Psi + self.q * self.Phi + self.Psi * self.Phi
        ) / (self.q + self.Psi)

    @property
    def rate(self) -> float:
        """Exponential rate Psi + q of C1(t)^q."""
        return self.Psi + self.q

    def with_psi_phi(self, psi: float, phi: float) -> "DelayDependentConstants":
        return DelayDependentConstants(
            g=self.g,
            q=self.q,
            V=self.V,
            Psi=psi,
            Phi=phi,
            three_pow=self.three_pow,
            lam_A=self.lam_A,
            lam_B=self.lam_B,
        )


@dataclass(frozen=True)
class DelayIndependentConstants:
    """Constants of the delay-independent bound curve C2.

    Attributes:
        lam_S: lambda_max(A) + lambda_max(B)
        rate: lam_S + 2 L_f
        lam_A: Largest singular value of A
        lam_B: Largest singular value of B
    """

    lam_S: float
    rate: float
    lam_A: float = 0.0
    lam_B: float = 0.0

    def coefficient(self, alpha: float) -> float:
        """rate / Gamma(alpha + 1), the t^alpha coefficient of C2."""
        return self.rate / gamma(alpha + 1.0)


def compute_psi_phi(
    spec: SystemSpec,
    printed: Optional[PrintedConstants] = None,
    audit: Optional[List[AuditNote]] = None,
) -> Tuple[float, float]:
    """Psi and Phi of the delay-dependent criterion, as displayed.

        Psi = 3^(1/a) ((lA + Lf)^q + (lB + Lf)^q e^(-q tau)) V^q / Gamma(a)^q
        Phi = 3^(1/a) (lB + Lf)^q (1 - e^(-tau q)) V^q / (q Gamma(a)^q)

    Args:
        spec: System specification
        printed: Optional published values to compare against
        audit: List receiving one note per compared constant

    Returns:
        Formula-derived (Psi, Phi)
    """
    alpha = _check_alpha(spec.alpha)
    _, q = holder_exponents(alpha)
    three_pow = 3.0 ** (1.0 / alpha)
    scale = three_pow * (compute_V(alpha) / gamma(alpha)) ** q
    lf = spec.lipschitz_constant
    lam_a = max_singular_value(spec.A)
    lam_b = max_singular_value(spec.B)

    psi = scale * ((lam_a + lf) ** q + (lam_b + lf) ** q * math.exp(-q * spec.tau))
    phi = scale * (lam_b + lf) ** q * (1.0 - math.exp(-spec.tau * q)) / q
    logger.debug(f"Formula constants Psi={psi:.6g}, Phi={phi:.6g}")

    if printed is not None and printed.overrides_psi_phi and audit is not None:
        audit.append(compare("Psi", printed.psi, psi))
        audit.append(compare("Phi", printed.phi, phi))
    return psi, phi


def delay_dependent_constants(spec: SystemSpec) -> DelayDependentConstants:
    """All formula-derived constants of C1 for ``spec``."""
    g, q = holder_exponents(spec.alpha)
    psi, phi = compute_psi_phi(spec)
    return DelayDependentConstants(
        g=g,
        q=q,
        V=compute_V(spec.alpha),
        Psi=psi,
        Phi=phi,
        three_pow=3.0 ** (1.0 / spec.alpha),
        lam_A=max_singular_value(spec.A),
        lam_B=max_singular_value(spec.B),
    )


def delay_independent_constants(spec: SystemSpec) -> DelayIndependentConstants:
    """lam_S and rate = lam_S + 2 L_f for ``spec``."""
    lam_a = max_singular_value(spec.A)
    lam_b = max_singular_value(spec.B)
    lam_s = lam_a + lam_b
    return DelayIndependentConstants(
        lam_S=lam_s,
        rate=lam_s + 2.0 * spec.lipschitz_constant,
        lam_A=lam_a,
        lam_B=lam_b,
    )
