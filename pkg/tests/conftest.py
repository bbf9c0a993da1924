"""
Pytest Configuration and Fixtures - Sparse VCH Control

Provides a desk-scale problem instance shared by the solver tests.
"""

import numpy as np
import pytest

from src.schemas import (
    ControlProblem,
    CostWeights,
    GeometrySpec,
    ProblemSpec,
    TimeSpec,
)


def pytest_configure(config):
    config.addinivalue_line("markers", "unit: unit tests (single function or operator)")
    config.addinivalue_line("markers", "integration: integration tests (full solves, CLI)")
    config.addinivalue_line("markers", "slow: default-instance acceptance runs")


@pytest.fixture
def small_spec() -> ProblemSpec:
    """n_cells=16, n_steps=20, T=0.1 with the default physics."""
    return ProblemSpec(
        geometry=GeometrySpec(length=1.0, n_cells=16),
        time=TimeSpec(horizon=0.1, n_steps=20),
        weights=CostWeights(b1=1.0, b2=0.5, b3=1e-2, kappa=0.0),
    )


@pytest.fixture
def small_problem(small_spec: ProblemSpec) -> ControlProblem:
    return small_spec.discretize()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def random_control(small_problem: ControlProblem, rng: np.random.Generator) -> np.ndarray:
    """A moderate admissible control, shape (n_steps, n_cells)."""
    return rng.uniform(-1.0, 1.0, size=small_problem.control_shape)


@pytest.fixture
def out_dir(tmp_path):
    path = tmp_path / "run"
    path.mkdir()
    return path
