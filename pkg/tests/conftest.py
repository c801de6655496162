"""Shared fixtures: the two bundled examples and small hand-built systems."""

import numpy as np
import pytest

from src.tempered_stability.config import ToleranceProfile
from src.tempered_stability.model import (
    HistoryFunction,
    Nonlinearity,
    StabilityQuery,
    SystemSpec,
    load_example,
)
from src.tempered_stability.operators import TemperedOrder
from src.tempered_stability.special_functions import MatrixNxN


@pytest.fixture(scope="session")
def example1():
    """Example 1 document (alpha 0.3, threshold 60, zero history)."""
    return load_example("example1")


@pytest.fixture(scope="session")
def example2():
    """Example 2 document (alpha 0.5, threshold 10, coswave history)."""
    return load_example("example2")


@pytest.fixture
def profile():
    """Default tolerance profile."""
    return ToleranceProfile()


def make_spec(
    A,
    B,
    history=(0.01, -0.01),
    alpha=0.5,
    rho=0.5,
    tau=0.2,
    horizon=1.0,
    nonlinearity=None,
):
    """Two-dimensional system with a constant history."""
    return SystemSpec(
        order=TemperedOrder(alpha, rho),
        tau=tau,
        horizon=horizon,
        A=MatrixNxN.from_rows(A),
        B=MatrixNxN.from_rows(B),
        nonlinearity=nonlinearity or Nonlinearity.none(),
        history=HistoryFunction.constant(history),
    )


@pytest.fixture
def decay_spec():
    """A = B = 0, f = none: the solution is omega(0) e^{-rho t}."""
    return make_spec(np.zeros((2, 2)), np.zeros((2, 2)), history=(0.3, -0.7), horizon=2.0)


@pytest.fixture
def stable_spec():
    """Small stable linear delay system used by the solver diagnostics."""
    return make_spec(
        [[-1.0, 0.2], [0.1, -0.8]],
        [[0.1, 0.0], [0.05, -0.1]],
        history=(0.01, 0.005),
        horizon=2.0,
    )


@pytest.fixture
def query():
    return StabilityQuery(xi=0.02, epsilon=0.2, J_end=1.0)
