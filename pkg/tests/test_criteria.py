"""Unit tests for the finite-time-stability criteria and the printed-constant audit."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from src.tempered_stability.config import ToleranceProfile
from src.tempered_stability.criteria import (
    Criterion,
    Verdict,
    audit_printed_constants,
    c1_bound,
    c2_bound,
    c2_curve,
    c2_printed_curve,
    classify,
    compute_psi_phi,
    compute_V,
    delay_dependent_constants,
    delay_independent_constants,
    evaluate_criterion,
    first_crossing_time,
    holder_exponents,
    homogeneous_criteria,
)
from src.tempered_stability.criteria.constants import DelayIndependentConstants
from src.tempered_stability.exceptions import ConfigurationError, DomainError, ValidationError
from src.tempered_stability.model import StabilityQuery

from .conftest import make_spec


def brute_force_psi_phi(spec):
    """Psi and Phi evaluated independently: quadrature for V, LAPACK for lambda_max."""
    alpha, tau = spec.alpha, spec.tau
    g, q = 1.0 + alpha, 1.0 + 1.0 / alpha
    # V^g = int_0^inf e^{-g s} s^{alpha^2 - 1} ds, with s = u^(1/alpha^2); negligible past u = 5
    power = 1.0 / alpha**2
    v_g, _ = integrate.quad(
        lambda u: math.exp(-g * u**power) / alpha**2, 0.0, 5.0, epsabs=0.0, epsrel=1e-12, limit=200
    )
    V = v_g ** (1.0 / g)
    lam_a = np.linalg.svd(spec.A.as_array(), compute_uv=False)[0]
    lam_b = np.linalg.svd(spec.B.as_array(), compute_uv=False)[0]
    lf = spec.lipschitz_constant
    scale = 3.0 ** (1.0 / alpha) * V**q / special.gamma(alpha) ** q
    psi = scale * ((lam_a + lf) ** q + (lam_b + lf) ** q * math.exp(-q * tau))
    phi = scale * (lam_b + lf) ** q * (1.0 - math.exp(-tau * q)) / q
    return psi, phi


class TestConstants:
    """Tests for the derived criterion constants."""

    def test_holder_exponents(self):
        """g = 1 + alpha, q = 1 + 1/alpha."""
        assert holder_exponents(0.5) == (1.5, 3.0)

    @given(st.floats(min_value=1e-3, max_value=0.999))
    def test_holder_conjugate(self, alpha):
        """1/g + 1/q = 1 with g, q > 1 across (0, 1)."""
        g, q = holder_exponents(alpha)
        assert g > 1.0 and q > 1.0
        assert 1.0 / g + 1.0 / q == pytest.approx(1.0, rel=1e-12)

    def test_alpha_domain(self):
        """alpha must lie in (0, 1)."""
        with pytest.raises(DomainError):
            holder_exponents(1.0)

    def test_V_positive(self):
        """V is finite and positive for admissible alpha."""
        for alpha in (0.1, 0.3, 0.5, 0.9):
            assert 0.0 < compute_V(alpha) < math.inf

    @pytest.mark.parametrize("name", ["example1", "example2"])
    def test_psi_phi_oracle(self, name, request):
        """Formula Psi and Phi agree with an independent evaluation."""
        doc = request.getfixturevalue(name)
        psi, phi = compute_psi_phi(doc.spec)
        expected_psi, expected_phi = brute_force_psi_phi(doc.spec)
        assert psi == pytest.approx(expected_psi, rel=1e-8)
        assert phi == pytest.approx(expected_phi, rel=1e-8)

    def test_example2_c2_constants(self, example2):
        """Example 2: coefficient 0.4063 and rate 0.36."""
        k = delay_independent_constants(example2.spec)
        assert k.coefficient(0.5) == pytest.approx(0.4063, abs=5e-4)
        assert k.rate == pytest.approx(0.36, rel=1e-12)
        assert (k.lam_A, k.lam_B) == (pytest.approx(0.2), pytest.approx(0.1))

    def test_example1_c2_constants(self, example1):
        """Example 1: coefficient 14.4847 = 13 / Gamma(1.3)."""
        k = delay_independent_constants(example1.spec)
        assert k.rate == pytest.approx(13.0, rel=1e-12)
        assert k.lam_S == pytest.approx(7.0, rel=1e-12)
        assert k.coefficient(0.3) == pytest.approx(14.4847, abs=5e-3)

    def test_example1_printed_curve_constants(self, example1):
        """Printed Psi, Phi give coefficient 4.1088 and rate 4.8279."""
        printed = example1.printed
        k = delay_dependent_constants(example1.spec).with_psi_phi(printed.psi, printed.phi)
        assert k.three_pow == pytest.approx(38.9413, rel=1e-5)
        assert k.coefficient == pytest.approx(4.1088, rel=5e-4)
        assert k.rate == pytest.approx(4.8279, rel=5e-4)

    def test_example2_printed_curve_constants(self, example2):
        """Printed Psi, Phi give 8.9776 + 0.0226 e^{3.0075 t}."""
        printed = example2.printed
        k = delay_dependent_constants(example2.spec).with_psi_phi(printed.psi, printed.phi)
        assert k.additive == pytest.approx(8.9776, rel=5e-4)
        # 0.0226 is printed to four decimals; computed 0.022629
        assert k.coefficient == pytest.approx(0.0226, abs=5e-5)
        assert k.rate == pytest.approx(3.0075, rel=5e-4)


class TestBounds:
    """Tests for the C1 and C2 bound curves."""

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    def test_c1_collapse(self, alpha):
        """Psi = Phi = 0 gives C1 = 3^(1/(alpha+1)) for all t."""
        spec = make_spec(np.eye(2), np.eye(2), alpha=alpha)
        k = delay_dependent_constants(spec).with_psi_phi(0.0, 0.0)
        bounds = c1_bound(np.linspace(0.0, 5.0, 50), k)
        np.testing.assert_allclose(bounds, 3.0 ** (1.0 / (alpha + 1.0)), rtol=1e-12)

    def test_c1_at_origin(self, example2):
        """C1(0) = (3^(1/alpha) + Phi)^(1/q) after simplification."""
        printed = example2.printed
        k = delay_dependent_constants(example2.spec).with_psi_phi(printed.psi, printed.phi)
        expected = (k.additive + k.coefficient) ** (1.0 / k.q)
        assert c1_bound(0.0, k) == pytest.approx(expected, rel=1e-13)

    def test_c1_overflow_sentinel(self, example1):
        """Exponents past the guard give +inf and one audit note."""
        k = delay_dependent_constants(example1.spec).with_psi_phi(0.5, 0.1)
        notes = []
        bounds = c1_bound(np.array([0.0, 1.0, 500.0]), k, overflow_exponent=700.0, audit=notes)
        assert math.isfinite(bounds[1]) and bounds[2] == math.inf
        assert len(notes) == 1 and notes[0].classification == "info"

    def test_c1_negative_time(self, example2):
        """t < 0 is outside the domain."""
        with pytest.raises(DomainError):
            c1_bound(-1.0, delay_dependent_constants(example2.spec))

    def test_c2_origin(self):
        """C2(0) = 1."""
        assert c2_bound(0.0, DelayIndependentConstants(0.3, 0.36), 0.5) == 1.0

    def test_c2_nondecreasing(self, example2):
        """C2 is nondecreasing in t."""
        k = delay_independent_constants(example2.spec)
        values = [c2_bound(t, k, 0.5) for t in np.linspace(0.0, 4.0, 200)]
        assert np.all(np.diff(values) >= 0)

    def test_c2_printed_curve(self, example2):
        """The printed C2 curve is close to the formula curve."""
        k = delay_independent_constants(example2.spec)
        times = np.linspace(0.0, 4.0, 20)
        printed = c2_printed_curve(times, 0.4063, 0.36, 0.5)
        formula = [c2_bound(t, k, 0.5) for t in times]
        np.testing.assert_allclose(printed, formula, rtol=5e-4)

    @settings(max_examples=25, deadline=None)
    @given(
        st.floats(min_value=0.0, max_value=5.0),
        st.floats(min_value=0.0, max_value=5.0),
        st.floats(min_value=0.1, max_value=0.95),
        st.floats(min_value=0.1, max_value=5.0),
    )
    def test_c1_monotone_random_constants(self, psi, phi, alpha, horizon):
        """C1 never decreases on a 1000-point grid for any Psi, Phi >= 0."""
        k = delay_dependent_constants(make_spec(np.eye(2), np.eye(2), alpha=alpha))
        bounds = c1_bound(np.linspace(0.0, horizon, 1000), k.with_psi_phi(psi, phi))
        assert np.all(np.isfinite(bounds))
        assert np.all(np.diff(bounds) >= -1e-12 * bounds[1:])

    @settings(max_examples=25, deadline=None)
    @given(
        st.floats(min_value=0.0, max_value=3.0),
        st.floats(min_value=0.3, max_value=0.95),
        st.floats(min_value=0.1, max_value=2.0),
    )
    def test_c2_monotone_random_constants(self, rate, alpha, horizon):
        """C2 never decreases on a 1000-point grid for any rate >= 0."""
        k = DelayIndependentConstants(rate, rate)
        bounds = c2_curve(np.linspace(0.0, horizon, 1000), k, alpha)
        assert bounds[0] == 1.0
        assert np.all(np.diff(bounds) >= -1e-12 * bounds[1:])


class TestEvaluateCriterion:
    """Tests for verdicts of the two criteria."""

    def test_example2_delay_independent_stable(self, example2):
        """Example 2, C2 <= 10 on [0, 4]."""
        report = evaluate_criterion(example2.spec, example2.query, "delay_independent")
        assert report.verdict is Verdict.FINITE_TIME_STABLE
        assert report.bounds[-1] == pytest.approx(5.15, abs=0.05)
        assert report.first_crossing is None
        assert len(report.curve) == 1000

    def test_example2_delay_dependent_inconclusive(self, example2):
        """Example 2, C1 with printed constants exceeds 10 inside [3.5, 4]."""
        report = evaluate_criterion(
            example2.spec, example2.query, "delay-dependent", printed=example2.printed
        )
        assert report.uses_printed
        assert report.verdict is Verdict.INCONCLUSIVE
        assert 3.5 <= report.first_crossing <= 4.0
        assert report.bounds[np.searchsorted(report.times, 3.5)] <= 10.0

    def test_example1_delay_dependent_stable(self, example1):
        """Example 1, C1 with printed constants stays <= 60 on [0, 3]."""
        report = evaluate_criterion(
            example1.spec, example1.query, Criterion.DELAY_DEPENDENT, printed=example1.printed
        )
        assert report.verdict is Verdict.FINITE_TIME_STABLE
        assert report.bounds[-1] == pytest.approx(39.2, abs=0.2)

    def test_example1_delay_independent_inconclusive(self, example1):
        """Example 1, C2 exceeds 60 before t = 3."""
        report = evaluate_criterion(example1.spec, example1.query, "delay_independent")
        assert report.verdict is Verdict.INCONCLUSIVE
        assert report.first_crossing < 3.0

    def test_formula_constants_kept(self, example1):
        """Both constant sets appear in the report."""
        report = evaluate_criterion(
            example1.spec, example1.query, "delay_dependent", printed=example1.printed
        )
        out = report.to_dict()
        assert out["constants"]["Psi"] == 0.4945
        assert out["formula_constants"]["Psi"] == pytest.approx(
            compute_psi_phi(example1.spec)[0]
        )
        assert out["uses_printed_constants"] is True

    def test_raising_epsilon(self, example2):
        """Raising epsilon can only turn an inconclusive verdict stable."""
        spec = example2.spec
        low = evaluate_criterion(spec, StabilityQuery(0.02, 0.08, 4.0), "delay_independent")
        high = evaluate_criterion(spec, StabilityQuery(0.02, 0.2, 4.0), "delay_independent")
        assert low.verdict is Verdict.INCONCLUSIVE
        assert high.verdict is Verdict.FINITE_TIME_STABLE
        np.testing.assert_array_equal(low.bounds, high.bounds)

    @pytest.mark.parametrize(
        "criterion, epsilon",
        [("delay_independent", 0.08), ("delay_independent", 0.2), ("delay_dependent", 0.2)],
    )
    @pytest.mark.parametrize("scale", [0.5, 3.0, 10.0])
    def test_threshold_scaling(self, example2, criterion, epsilon, scale):
        """Scaling xi and epsilon together keeps the verdict and crossing time."""
        spec, printed = example2.spec, example2.printed
        base = evaluate_criterion(
            spec, StabilityQuery(0.02, epsilon, 4.0), criterion, printed=printed
        )
        scaled = evaluate_criterion(
            spec, StabilityQuery(0.02 * scale, epsilon * scale, 4.0), criterion, printed=printed
        )
        assert scaled.verdict is base.verdict
        assert scaled.threshold == pytest.approx(base.threshold, rel=1e-14)
        np.testing.assert_array_equal(scaled.bounds, base.bounds)
        if base.first_crossing is None:
            assert scaled.first_crossing is None
        else:
            assert scaled.first_crossing == pytest.approx(base.first_crossing, rel=1e-9)

    def test_curve_monotone(self, example2):
        """Sampled curves never decrease."""
        for criterion in Criterion:
            report = evaluate_criterion(
                example2.spec, example2.query, criterion, printed=example2.printed
            )
            assert np.all(np.diff(report.bounds) >= 0)

    def test_to_frame(self, example2):
        """Curve table has columns t, bound, threshold."""
        frame = evaluate_criterion(
            example2.spec, example2.query, "delay_independent", grid_points=11
        ).to_frame()
        assert list(frame.columns) == ["t", "bound", "threshold"]
        assert len(frame) == 11 and frame["t"].iloc[-1] == 4.0

    def test_grid_points_validated(self, example2):
        """At least two grid points are needed."""
        with pytest.raises(ConfigurationError):
            evaluate_criterion(example2.spec, example2.query, "delay_independent", grid_points=1)

    def test_unknown_criterion(self, example2):
        """Unknown criterion names are rejected."""
        with pytest.raises(ConfigurationError):
            evaluate_criterion(example2.spec, example2.query, "lyapunov")

    def test_hypothesis_note(self, example2):
        """A history at or above xi is flagged in the audit."""
        query = StabilityQuery(0.01, 0.2, 4.0)
        report = evaluate_criterion(example2.spec, query, "delay_independent")
        assert not report.hypothesis_met
        assert any(note.quantity == "hypothesis" for note in report.audit)

    def test_profile_grid(self, example2):
        """grid_points defaults to the profile value."""
        report = evaluate_criterion(
            example2.spec,
            example2.query,
            "delay_independent",
            config=ToleranceProfile(grid_points=25),
        )
        assert len(report.times) == 25


class TestHomogeneousCriteria:
    """Tests for the f = none corollaries."""

    def test_rate_is_lambda_s(self, query):
        """With L_f = 0 the C2 rate is lambda_S."""
        spec = make_spec([[-1.0, 0.0], [0.0, -0.5]], [[0.2, 0.0], [0.0, 0.1]])
        report = homogeneous_criteria(spec, query, "delay_independent")
        assert report.constants.rate == pytest.approx(report.constants.lam_S)
        assert report.constants.lam_S == pytest.approx(1.2)

    def test_rejects_nonlinear(self, example1):
        """A system with f is rejected."""
        with pytest.raises(ValidationError):
            homogeneous_criteria(example1.spec, example1.query, "delay_dependent")


class TestFirstCrossing:
    """Tests for locating the first threshold crossing."""

    def test_bisection(self):
        """The crossing of t^2 over 2 is sqrt(2)."""
        times = np.linspace(0.0, 2.0, 11)
        crossing = first_crossing_time(lambda t: t * t, times, times**2, 2.0)
        assert crossing == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_never_crosses(self):
        """None when the curve stays below."""
        times = np.linspace(0.0, 1.0, 5)
        assert first_crossing_time(lambda t: t, times, times, 2.0) is None


class TestAudit:
    """Tests for the printed-constant audit."""

    def test_classify(self):
        """Matches, rounding and discrepancy."""
        assert classify(2.0, 2.0)[0] == "matches"
        assert classify(4.1088, 4.10874)[0] == "rounding"
        assert classify(0.0226, 0.022629)[0] == "rounding"
        assert classify(0.4945, 25.0)[0] == "discrepancy"

    def test_example1(self, example1):
        """Psi, Phi and the additive constant are flagged; the rest is rounding."""
        notes = {n.quantity: n for n in audit_printed_constants(example1.spec, example1.printed)}
        assert notes["Psi"].classification == "discrepancy"
        assert notes["Phi"].classification == "discrepancy"
        additive = notes["C1 additive constant"]
        assert additive.classification == "discrepancy"
        assert "factor q is missing" in additive.message
        assert notes["C1 exponential coefficient"].classification == "rounding"
        assert notes["C2 coefficient"].classification == "rounding"
        assert notes["lambda_S"].classification == "matches"

    def test_example2(self, example2):
        """Example 2: Psi, Phi flagged, curve constants and Gamma(1.5) are rounding."""
        notes = {n.quantity: n for n in audit_printed_constants(example2.spec, example2.printed)}
        assert notes["Psi"].classification == "discrepancy"
        assert notes["Phi"].classification == "discrepancy"
        assert notes["C1 additive constant"].classification == "rounding"
        assert notes["C1 exponential coefficient"].classification == "rounding"
        assert notes["Gamma(alpha+1)"].classification == "rounding"
        assert notes["C2 rate"].classification == "matches"

    def test_criterion_filter(self, example2):
        """Restricting to one criterion drops the other's constants."""
        notes = audit_printed_constants(example2.spec, example2.printed, "delay_independent")
        assert "Psi" not in {n.quantity for n in notes}
