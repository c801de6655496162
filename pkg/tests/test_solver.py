"""Unit tests for the delay solvers and trajectory diagnostics."""

import math

import numpy as np
import pandas as pd
import pytest

from src.tempered_stability.criteria import evaluate_criterion
from src.tempered_stability.exceptions import (
    ConfigurationError,
    DivergenceError,
    StepDelayError,
)
from src.tempered_stability.model import HistoryFunction, Nonlinearity, StabilityQuery, SystemSpec
from src.tempered_stability.operators import TemperedOrder
from src.tempered_stability.solver import (
    ExpTransformCaputo,
    SolverConfig,
    SolverMethod,
    TemperedProductIntegration,
    Trajectory,
    cross_validate,
    empirical_order,
    get_solver,
    residual_check,
    solve,
    verify_bound,
)
from src.tempered_stability.special_functions import MatrixNxN, mittag_leffler

from .conftest import make_spec

STEPS = (4e-3, 2e-3, 1e-3, 5e-4)


@pytest.fixture(scope="module")
def example2_trajectory(example2):
    """Example 2 at h = 1e-3 over [0, 4]."""
    return solve(example2.spec, SolverConfig(h=1e-3))


def random_stable_spec(seed, alpha=0.5, homogeneous=False):
    """2x2 system with A = -diag(positive) + small coupling and small B."""
    rng = np.random.default_rng(seed)
    A = -np.diag(rng.uniform(0.2, 1.5, 2)) + rng.uniform(-0.2, 0.2, (2, 2)) * (1 - np.eye(2))
    B = rng.uniform(-0.2, 0.2, (2, 2))
    f = None
    if not homogeneous:
        f = Nonlinearity("linear_combo", 0.05, 0.05, "sin_elementwise", "identity", 0.05)
    history = tuple(rng.uniform(-0.02, 0.02, 2))
    return make_spec(A, B, history=history, alpha=alpha, rho=rng.uniform(0.1, 1.0), nonlinearity=f)


class TestSolverConfig:
    """Tests for step and delay handling."""

    def test_divisible_step(self):
        """tau = 0.2, h = 1e-3 gives lag 200 and keeps h."""
        h, lag = SolverConfig(h=1e-3).resolve_step(0.2)
        assert lag == 200
        assert h == pytest.approx(1e-3)

    def test_require_divisible(self):
        """A step that does not divide tau is rejected."""
        cfg = SolverConfig(h=0.03, delay_grid_policy="require_divisible")
        with pytest.raises(StepDelayError):
            cfg.resolve_step(0.2)

    def test_auto_adjust(self):
        """The step is shrunk so tau is a whole number of steps."""
        h, lag = SolverConfig(h=0.03).resolve_step(0.2)
        assert lag == 7
        assert h == pytest.approx(0.2 / 7)

    def test_invalid_step(self):
        """Non-positive steps are rejected."""
        with pytest.raises(ConfigurationError):
            SolverConfig(h=-1e-3)

    def test_method_names(self):
        """CLI spellings map to solver methods."""
        assert SolverMethod.parse("tempered") is SolverMethod.TEMPERED_PRODUCT_INTEGRATION
        assert SolverMethod.parse("exp-transform") is SolverMethod.EXP_TRANSFORM_CAPUTO
        with pytest.raises(ConfigurationError):
            SolverMethod.parse("euler")

    def test_get_solver(self):
        """Each method has its solver class."""
        assert isinstance(get_solver(SolverConfig()), TemperedProductIntegration)
        cfg = SolverConfig(method=SolverMethod.EXP_TRANSFORM_CAPUTO)
        assert isinstance(get_solver(cfg), ExpTransformCaputo)


class TestSolve:
    """Tests for the predictor-corrector solvers."""

    def test_zero_history_stays_zero(self, example1):
        """Example 1 with zero history has the zero solution."""
        traj = solve(example1.spec, SolverConfig(h=1e-3))
        assert traj.max_norm <= 1e-12
        assert traj.times[-1] == pytest.approx(3.0)

    @pytest.mark.parametrize("method", list(SolverMethod))
    def test_pure_decay(self, decay_spec, method):
        """A = B = 0: y(t) = omega(0) e^{-rho t}."""
        traj = solve(decay_spec, SolverConfig(h=1e-3, method=method))
        expected = np.outer(np.exp(-decay_spec.rho * traj.times), [0.3, -0.7])
        np.testing.assert_allclose(traj.states, expected, atol=1e-8)

    def test_initial_state(self, example2_trajectory):
        """states[0] = omega(0)."""
        np.testing.assert_allclose(example2_trajectory.states[0], [0.01, 0.01])

    @pytest.mark.slow
    def test_example2_stays_below_epsilon(self, example2_trajectory):
        """Example 2 trajectory stays below 0.2 on [0, 4]."""
        assert example2_trajectory.max_norm < 0.2
        assert len(example2_trajectory) == 4001

    def test_grid_covers_horizon(self):
        """A horizon that is not a multiple of h is covered by the last node."""
        spec = make_spec(np.zeros((2, 2)), np.zeros((2, 2)), horizon=1.05)
        traj = solve(spec, SolverConfig(h=0.1))
        assert 1.05 <= traj.times[-1] < 1.05 + 0.1

    def test_divergence(self):
        """Explosive systems stop with the first bad index."""
        spec = make_spec(50.0 * np.eye(2), np.zeros((2, 2)), history=(1.0, 1.0), horizon=5.0)
        with pytest.raises(DivergenceError) as info:
            solve(spec, SolverConfig(h=1e-2, divergence_threshold=1e6))
        assert info.value.index > 0

    def test_step_delay_error(self, example2):
        """require_divisible propagates from solve."""
        cfg = SolverConfig(h=0.03, delay_grid_policy="require_divisible")
        with pytest.raises(StepDelayError):
            solve(example2.spec, cfg)

    @pytest.mark.parametrize("method", list(SolverMethod))
    def test_caputo_reduction(self, method):
        """rho = 0, A = -I, B = 0: y(t) = E_alpha(-t^alpha) omega(0)."""
        spec = SystemSpec(
            order=TemperedOrder.relaxed(0.5, 0.0),
            tau=0.2,
            horizon=2.0,
            A=MatrixNxN.from_rows(-np.eye(2)),
            B=MatrixNxN.zeros(2),
            nonlinearity=Nonlinearity.none(),
            history=HistoryFunction.constant([1.0, 1.0]),
        )
        traj = solve(spec, SolverConfig(h=1e-3, method=method))
        expected = np.array([mittag_leffler(0.5, -(t**0.5)) for t in traj.times])
        np.testing.assert_allclose(traj.states[:, 0], expected, atol=1e-3)
        np.testing.assert_allclose(traj.states[:, 1], traj.states[:, 0])


class TestTrajectory:
    """Tests for the trajectory container."""

    def test_frame_columns(self, example2_trajectory):
        """Columns are t, y1, y2, norm_inf."""
        frame = example2_trajectory.to_frame()
        assert list(frame.columns) == ["t", "y1", "y2", "norm_inf"]
        np.testing.assert_array_equal(frame["norm_inf"], example2_trajectory.norm_track)

    def test_csv_round_trip(self, example2_trajectory, tmp_path):
        """CSV export keeps every bit."""
        path = example2_trajectory.to_csv(tmp_path / "trajectory.csv")
        back = pd.read_csv(path, float_precision="round_trip")
        np.testing.assert_array_equal(back["y1"].to_numpy(), example2_trajectory.states[:, 0])

    def test_read_only(self, example2_trajectory):
        """States cannot be modified in place."""
        with pytest.raises(ValueError):
            example2_trajectory.states[0, 0] = 1.0


class TestCrossValidate:
    """Tests for agreement between the two methods."""

    def test_zero_system(self, example1):
        """Both methods give the zero solution for Example 1."""
        assert cross_validate(example1.spec, SolverConfig(h=1e-3)).max_discrepancy == 0.0

    @pytest.mark.slow
    def test_example2(self, example2):
        """Example 2: methods agree within 1e-4."""
        report = cross_validate(example2.spec, SolverConfig(h=1e-3))
        assert report.max_discrepancy <= 1e-4

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(20))
    def test_random_systems(self, seed):
        """Randomised stable 2x2 systems: methods agree within 1e-4."""
        report = cross_validate(random_stable_spec(seed), SolverConfig(h=1e-3))
        assert report.max_discrepancy <= 1e-4


class TestResidual:
    """Tests for the differential-form residual."""

    def test_zero_trajectory(self, example1):
        """The zero solution has zero residual."""
        traj = solve(example1.spec, SolverConfig(h=1e-2))
        assert residual_check(traj, example1.spec).max_residual == 0.0

    def test_pure_decay(self, decay_spec):
        """omega(0) e^{-rho t} satisfies the homogeneous equation."""
        traj = solve(decay_spec, SolverConfig(h=1e-3))
        report = residual_check(traj, decay_spec)
        assert report.max_residual < 1e-6
        assert report.first_index == math.ceil(0.02 * decay_spec.horizon / traj.h)

    def test_linear_system(self, stable_spec):
        """Residual of a coupled delay system is small against its scale."""
        traj = solve(stable_spec, SolverConfig(h=1e-3))
        report = residual_check(traj, stable_spec)
        assert report.max_residual < 1e-3

    @pytest.mark.slow
    def test_decreases_under_refinement(self, stable_spec):
        """Halving the step lowers the maximum residual."""
        residuals = [
            residual_check(solve(stable_spec, SolverConfig(h=h)), stable_spec).max_residual
            for h in (2e-3, 1e-3, 5e-4)
        ]
        assert residuals[0] > residuals[1] > residuals[2]


class TestEmpiricalOrder:
    """Tests for observed convergence order."""

    def test_zero_system_exact(self, example1):
        """Zero errors give an exact report."""
        report = empirical_order(example1.spec, (0.04, 0.02, 0.01, 0.005))
        assert report.exact and report.label == "exact"

    def test_needs_four_steps(self, stable_spec):
        """Three steps are not enough."""
        with pytest.raises(ConfigurationError):
            empirical_order(stable_spec, (4e-3, 2e-3, 1e-3))

    @pytest.mark.slow
    @pytest.mark.parametrize("alpha, minimum", [(0.5, 1.2), (0.3, 1.0)])
    def test_order(self, alpha, minimum):
        """Observed order on a smooth homogeneous system."""
        spec = make_spec(
            [[-1.0, 0.2], [0.1, -0.8]],
            [[0.1, 0.0], [0.05, -0.1]],
            history=(0.01, 0.005),
            alpha=alpha,
            horizon=1.0,
        )
        report = empirical_order(spec, STEPS)
        assert report.order >= minimum


class TestVerifyBound:
    """Tests for checking trajectories against criterion reports."""

    @pytest.mark.slow
    def test_example2_passes(self, example2, example2_trajectory):
        """Example 2 stays below epsilon and below ||omega||_C C2(t)."""
        report = evaluate_criterion(example2.spec, example2.query, "delay_independent")
        result = verify_bound(example2_trajectory, example2.query, report)
        assert result.passed and result.hypothesis_met
        assert result.epsilon_check is True and result.bound_check is True
        assert not result.contradiction

    def test_zero_trajectory(self, example1):
        """The zero solution passes trivially."""
        report = evaluate_criterion(
            example1.spec, example1.query, "delay_dependent", printed=example1.printed
        )
        traj = solve(example1.spec, SolverConfig(h=1e-2))
        result = verify_bound(traj, example1.query, report)
        assert result.passed and result.epsilon_check is True and result.bound_check is None

    def test_hypothesis_unmet(self, example2):
        """||omega||_C >= xi skips the epsilon check with a note."""
        query = StabilityQuery(0.01, 0.2, 4.0)
        report = evaluate_criterion(example2.spec, query, "delay_independent")
        traj = solve(example2.spec, SolverConfig(h=1e-2))
        result = verify_bound(traj, query, report)
        assert not result.hypothesis_met
        assert result.epsilon_check is None
        assert any("hypothesis unmet" in note for note in result.notes)

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(20))
    def test_random_homogeneous_systems(self, seed):
        """Random linear delay systems stay under ||omega||_C C2(t)."""
        spec = random_stable_spec(seed, homogeneous=True)
        query = StabilityQuery(0.05, 50.0, spec.horizon)
        report = evaluate_criterion(spec, query, "delay_independent")
        result = verify_bound(solve(spec, SolverConfig(h=2e-3)), query, report)
        assert result.bound_check is True
        assert result.epsilon_check is True
        assert result.passed and not result.contradiction

    def test_contradiction_sentinel(self, example2):
        """A trajectory above epsilon under a stable verdict is a contradiction."""
        report = evaluate_criterion(example2.spec, example2.query, "delay_independent")
        times = np.linspace(0.0, 1.0, 11)
        states = np.zeros((11, 2))
        states[3:] = 0.5
        method = SolverMethod.TEMPERED_PRODUCT_INTEGRATION
        traj = Trajectory.from_states(times, states, method, 0.1, 2)
        result = verify_bound(traj, example2.query, report)
        assert result.contradiction and not result.passed
        assert result.epsilon_check is False and result.bound_check is False
        assert result.first_failure_index == 3
        assert result.first_failure_time == pytest.approx(0.3)
