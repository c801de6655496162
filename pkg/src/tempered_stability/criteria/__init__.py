"""
Finite-time-stability criteria: delay-dependent (C1) and
delay-independent (C2) bound curves, verdicts and the printed-constant audit.
"""

from .audit import (
    CLASSIFICATIONS,
    AuditNote,
    audit_printed_constants,
    classify,
    compare,
)
from .bounds import c1_bound, c2_bound, c2_curve, c2_printed_curve
from .constants import (
    DelayDependentConstants,
    DelayIndependentConstants,
    compute_psi_phi,
    compute_V,
    delay_dependent_constants,
    delay_independent_constants,
    holder_exponents,
)
from .evaluate import (
    Criterion,
    CriterionReport,
    Verdict,
    evaluate_criterion,
    first_crossing_time,
    homogeneous_criteria,
)

__all__ = [
    "CLASSIFICATIONS",
    "AuditNote",
    "audit_printed_constants",
    "classify",
    "compare",
    "c1_bound",
    "c2_bound",
    "c2_curve",
    "c2_printed_curve",
    "DelayDependentConstants",
    "DelayIndependentConstants",
    "compute_psi_phi",
    "compute_V",
    "delay_dependent_constants",
    "delay_independent_constants",
    "holder_exponents",
    "Criterion",
    "CriterionReport",
    "Verdict",
    "evaluate_criterion",
    "first_crossing_time",
    "homogeneous_criteria",
]
