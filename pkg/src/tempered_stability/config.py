"""
Configuration management for the tempered stability package.

Provides the shared tolerance profile used by the special functions,
the stability criteria, the delay solvers and the command-line tools.
"""

from dataclasses import dataclass, fields, replace
from typing import Mapping, Optional

from .exceptions import ConfigurationError

DELAY_GRID_POLICIES = ("require_divisible", "auto_adjust_step")


@dataclass(frozen=True)
class ToleranceProfile:
    """Numerical tolerances and grid/step controls.

    Every field can be overridden from the command line with
    ``--tolerance KEY=VALUE``.

    Attributes:
        ml_series_term_cap: Maximum number of Mittag-Leffler series terms
        ml_series_rel_tol: Relative term size that stops the series
        ml_argument_switch: z above which the asymptotic branch is used
        ml_asymptotic_terms: Algebraic terms kept in the asymptotic branch
        grid_points: Samples used for criterion curves
        overflow_exponent: Natural-log exponent above which bounds are +inf
        divergence_threshold: Infinity-norm at which a solve is aborted
        default_step: Solver time step when none is given
        corrector_iterations: Corrector sweeps per solver step
        delay_grid_policy: How to reconcile the step with the delay
        divisibility_rtol: Relative tolerance for tau/h being integral
        verification_slack: Relative slack of trajectory bound checks
        lipschitz_trials: Monte-Carlo samples for Lipschitz validation
        lipschitz_radius: Sampling ball radius for Lipschitz validation
        lipschitz_seed: Seed of the Lipschitz sampler (keeps runs repeatable)
    """

    # Mittag-Leffler evaluation
    ml_series_term_cap: int = 400
    ml_series_rel_tol: float = 1e-12
    ml_argument_switch: float = 10.0
    ml_asymptotic_terms: int = 12

    # Criterion curves
    grid_points: int = 1000
    overflow_exponent: float = 700.0

    # Solver
    divergence_threshold: float = 1e12
    default_step: float = 1e-3
    corrector_iterations: int = 2
    delay_grid_policy: str = "auto_adjust_step"
    divisibility_rtol: float = 1e-9

    # Verification
    verification_slack: float = 1e-6
    lipschitz_trials: int = 2000
    lipschitz_radius: float = 1.0
    lipschitz_seed: int = 0

    def __post_init__(self) -> None:
        if self.grid_points < 2:
            raise ConfigurationError("grid_points must be at least 2")
        if self.corrector_iterations < 1:
            raise ConfigurationError("corrector_iterations must be at least 1")
        if self.delay_grid_policy not in DELAY_GRID_POLICIES:
            raise ConfigurationError(
                f"delay_grid_policy must be one of {DELAY_GRID_POLICIES}, "
                f"got {self.delay_grid_policy!r}"
            )
        if self.default_step <= 0:
            raise ConfigurationError("default_step must be positive")
        if self.overflow_exponent <= 0 or self.divergence_threshold <= 0:
            raise ConfigurationError("overflow thresholds must be positive")
        if self.lipschitz_trials < 1 or self.lipschitz_radius <= 0:
            raise ConfigurationError("lipschitz sampling needs trials >= 1, radius > 0")
        # MlEvalPolicy enforces its own invariants
        self.ml_policy

    @property
    def ml_policy(self):
        """Mittag-Leffler evaluation policy built from this profile."""
        from .special_functions import MlEvalPolicy

        return MlEvalPolicy(
            series_term_cap=self.ml_series_term_cap,
            series_rel_tol=self.ml_series_rel_tol,
            argument_switch=self.ml_argument_switch,
            asymptotic_terms=self.ml_asymptotic_terms,
        )

    @classmethod
    def from_overrides(
        cls, overrides: Optional[Mapping[str, str]] = None
    ) -> "ToleranceProfile":
        """Create a profile from ``KEY -> VALUE`` string overrides.

        Args:
            overrides: Mapping of field names to textual values

        Returns:
            ToleranceProfile with the overridden values

        Raises:
            ConfigurationError: For unknown keys or values that do not parse

        Example:
            >>> profile = ToleranceProfile.from_overrides({"grid_points": "200"})
            >>> profile.grid_points
            200
        """
        profile = cls()
        if not overrides:
            return profile

        types = {f.name: f.type for f in fields(cls)}
        changes = {}
        for key, raw in overrides.items():
            if key not in types:
                raise ConfigurationError(f"unknown tolerance key {key!r}")
            kind = types[key]
            try:
                if kind in (int, "int"):
                    changes[key] = int(raw)
                elif kind in (float, "float"):
                    changes[key] = float(raw)
                else:
                    changes[key] = str(raw)
            except ValueError as e:
                raise ConfigurationError(
                    f"tolerance {key!r} expects {kind}, got {raw!r}"
                ) from e

        return replace(profile, **changes)

    def __str__(self) -> str:
        """String representation of configuration."""
        return (
            f"ToleranceProfile(\n"
            f"  grid_points={self.grid_points}\n"
            f"  default_step={self.default_step}\n"
            f"  corrector_iterations={self.corrector_iterations}\n"
            f"  delay_grid_policy={self.delay_grid_policy}\n"
            f"  ml_series_rel_tol={self.ml_series_rel_tol}\n"
            f")"
        )


# Global default configuration instance
_default_config: Optional[ToleranceProfile] = None


def get_default_config() -> ToleranceProfile:
    """Get the global default tolerance profile.

    Returns:
        Global ToleranceProfile instance
    """
    global _default_config
    if _default_config is None:
        _default_config = ToleranceProfile()
    return _default_config


def set_default_config(config: ToleranceProfile) -> None:
    """Set the global default tolerance profile.

    Args:
        config: Profile to use as default
    """
    global _default_config
    _default_config = config
