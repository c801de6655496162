"""
Audit trail comparing published (printed) constants with computed ones.
"""

import logging
import math
from dataclasses import dataclass
from decimal import Decimal
from typing import List, Optional, Tuple

from ..model.system import PrintedConstants, SystemSpec
from ..special_functions import gamma

logger = logging.getLogger(__name__)

# relative gap still attributed to rounding of a printed value
ROUNDING_RTOL = 5e-4

CLASSIFICATIONS = ("matches", "rounding", "discrepancy", "info")


@dataclass(frozen=True)
class AuditNote:
    """One line of the audit trail.

    Attributes:
        quantity: Name of the compared constant (or topic of an info note)
        classification: ``matches``, ``rounding``, ``discrepancy`` or ``info``
        message: Human readable explanation
        printed: Published value, if any
        computed: Value computed here, if any
        relative_difference: |computed - printed| / |printed|
    """

    quantity: str
    classification: str
    message: str
    printed: Optional[float] = None
    computed: Optional[float] = None
    relative_difference: Optional[float] = None

    def __str__(self) -> str:
        if self.printed is None:
            return f"[{self.classification}] {self.quantity}: {self.message}"
        suffix = f" ({self.message})" if self.message else ""
        return (
            f"[{self.classification}] {self.quantity}: printed={self.printed!r} "
            f"computed={self.computed!r} rel_diff={self.relative_difference:.3e}{suffix}"
        )

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "classification": self.classification,
            "printed": self.printed,
            "computed": self.computed,
            "relative_difference": self.relative_difference,
            "message": self.message,
        }


def info(quantity: str, message: str) -> AuditNote:
    return AuditNote(quantity, "info", message)


def _last_digit_unit(printed: float) -> float:
    """Unit in the last printed decimal place, e.g. 0.0001 for 4.1088."""
    exponent = Decimal(repr(float(printed))).as_tuple().exponent
    return 10.0 ** min(int(exponent), 0)


def classify(printed: float, computed: float) -> Tuple[str, float]:
    """Classification and relative difference of a printed value.

    ``matches`` within 1e-12 relative; ``rounding`` when the gap is at most
    one unit in the last printed decimal place or ROUNDING_RTOL relative;
    ``discrepancy`` otherwise.
    """
    diff = abs(computed - printed)
    scale = abs(printed) if printed != 0 else 1.0
    rel = diff / scale if math.isfinite(diff) else math.inf

    if diff <= 1e-12 * max(1.0, abs(printed)):
        return "matches", rel
    if diff <= _last_digit_unit(printed) or rel <= ROUNDING_RTOL:
        return "rounding", rel
    return "discrepancy", rel


def compare(quantity: str, printed: float, computed: float, message: str = "") -> AuditNote:
    kind, rel = classify(printed, computed)
    if kind == "discrepancy":
        logger.warning(f"Printed {quantity}={printed!r} differs from computed {computed!r}")
    return AuditNote(quantity, kind, message, float(printed), float(computed), rel)


def audit_printed_constants(
    spec: SystemSpec,
    printed: PrintedConstants,
    criterion: Optional[str] = None,
) -> List[AuditNote]:
    """Compare every printed constant of an example with its computed value.

    The C1 curve constants (additive, coefficient, rate) are recomputed from
    the printed Psi and Phi, so they test the internal consistency of the
    published curve; Psi and Phi themselves are compared with the formulas.

    Args:
        spec: System the constants were published for
        printed: Published constants
        criterion: ``delay_dependent`` or ``delay_independent`` to restrict
            the audit to one criterion; None audits everything

    Returns:
        Audit notes in a fixed order
    """
    from .constants import (
        compute_psi_phi,
        delay_dependent_constants,
        delay_independent_constants,
        holder_exponents,
    )

    notes: List[AuditNote] = []
    alpha = spec.alpha

    if criterion in (None, "delay_dependent"):
        _, q = holder_exponents(alpha)
        if printed.q is not None:
            notes.append(compare("q", printed.q, q))
        compute_psi_phi(spec, printed, audit=notes)

        if printed.overrides_psi_phi:
            curve = delay_dependent_constants(spec).with_psi_phi(printed.psi, printed.phi)
            if printed.c1_additive is not None:
                message = ""
                without_q = curve.three_pow / (curve.q + curve.Psi)
                if classify(printed.c1_additive, without_q)[0] != "discrepancy":
                    message = "printed value equals 3^(1/alpha)/(q+Psi); the factor q is missing"
                notes.append(
                    compare("C1 additive constant", printed.c1_additive, curve.additive, message)
                )
            if printed.c1_coefficient is not None:
                notes.append(
                    compare(
                        "C1 exponential coefficient", printed.c1_coefficient, curve.coefficient
                    )
                )
            if printed.c1_rate is not None:
                notes.append(compare("C1 exponential rate", printed.c1_rate, curve.rate))

    if criterion in (None, "delay_independent"):
        k = delay_independent_constants(spec)
        for quantity, value, computed in (
            ("C2 coefficient", printed.c2_coefficient, k.coefficient(alpha)),
            ("C2 rate", printed.c2_rate, k.rate),
            ("lambda_max(A)", printed.lam_a, k.lam_A),
            ("lambda_max(B)", printed.lam_b, k.lam_B),
            ("lambda_S", printed.lam_s, k.lam_S),
            ("Gamma(alpha+1)", printed.gamma_alpha_plus_one, gamma(alpha + 1.0)),
        ):
            if value is not None:
                notes.append(compare(quantity, value, computed))

    return notes
