"""
Sensitivity Tests

Linearized and bilinearized solves around a base trajectory, checked
against forward-solve Taylor remainders.
"""

import numpy as np
import pytest

from src.core import mean_value, spacetime_norm
from src.sensitivity import SensitivitySolver, solve_bilinearized, solve_linearized
from src.state import StateSolver
from src.verification import smooth_direction, taylor_order


@pytest.fixture
def base_setup(small_problem, rng):
    u = rng.uniform(-1.0, 1.0, small_problem.control_shape)
    stepper = StateSolver(small_problem)
    base = stepper.solve(u)
    return u, stepper, base


@pytest.mark.unit
class TestLinearized:
    """Tests for the first directional derivative."""

    def test_zero_increment(self, small_problem, base_setup):
        _, _, base = base_setup
        lin = solve_linearized(small_problem.zero_control(), base, small_problem)
        assert not np.any(lin.xi) and not np.any(lin.eta) and not np.any(lin.v)

    def test_linear_in_increment(self, small_problem, base_setup, rng):
        _, _, base = base_setup
        solver = SensitivitySolver(small_problem, base)
        h = rng.standard_normal(small_problem.control_shape)
        k = rng.standard_normal(small_problem.control_shape)
        combined = solver.linearized(2.0 * h - k).xi
        separate = 2.0 * solver.linearized(h).xi - solver.linearized(k).xi
        np.testing.assert_allclose(combined, separate, atol=1e-12 * np.max(np.abs(separate)))

    def test_mean_free(self, small_problem, base_setup, rng):
        _, _, base = base_setup
        xi = solve_linearized(rng.standard_normal(small_problem.control_shape), base, small_problem).xi
        assert np.max(np.abs(mean_value(xi, small_problem.grid))) <= 1e-12

    def test_taylor_remainder_second_order(self, small_problem, base_setup, rng):
        u, stepper, base = base_setup
        grid, dt = small_problem.grid, small_problem.dt
        h = smooth_direction(small_problem, rng)
        xi = solve_linearized(h, base, small_problem).xi
        steps = [1e-1, 1e-2, 1e-3, 1e-4]
        increments = [stepper.solve(u + s * h, check_bounds=False).phi - base.phi for s in steps]
        remainders = [spacetime_norm(d - s * xi, grid, dt) for s, d in zip(steps, increments)]
        sizes = [spacetime_norm(d, grid, dt) for d in increments]
        assert taylor_order(steps, remainders, sizes) >= 1.9

    def test_cache_reuses_result(self, small_problem, base_setup, rng):
        _, _, base = base_setup
        solver = SensitivitySolver(small_problem, base, cache=True)
        h = rng.standard_normal(small_problem.control_shape)
        assert solver.linearized(h) is solver.linearized(h.copy())

    def test_rejects_wrong_shape(self, small_problem, base_setup):
        _, _, base = base_setup
        with pytest.raises(ValueError):
            SensitivitySolver(small_problem, base).linearized(np.zeros((2, 2)))


@pytest.mark.unit
class TestBilinearized:
    """Tests for the second directional derivative."""

    def test_zero_increment(self, small_problem, base_setup, rng):
        _, _, base = base_setup
        zero = small_problem.zero_control()
        second = solve_bilinearized(zero, rng.standard_normal(small_problem.control_shape), base, small_problem)
        assert not np.any(second.psi)

    def test_z_component_identically_zero(self, small_problem, base_setup, rng):
        _, _, base = base_setup
        h = rng.standard_normal(small_problem.control_shape)
        assert not np.any(solve_bilinearized(h, h, base, small_problem).z)

    def test_symmetric(self, small_problem, base_setup, rng):
        _, _, base = base_setup
        solver = SensitivitySolver(small_problem, base, cache=True)
        h = rng.standard_normal(small_problem.control_shape)
        k = rng.standard_normal(small_problem.control_shape)
        hk = solver.bilinearized(h, k).psi
        kh = solver.bilinearized(k, h).psi
        np.testing.assert_array_equal(hk, kh)

    def test_taylor_remainder_third_order(self, small_problem, base_setup, rng):
        u, stepper, base = base_setup
        grid, dt = small_problem.grid, small_problem.dt
        h = smooth_direction(small_problem, rng)
        solver = SensitivitySolver(small_problem, base)
        xi = solver.linearized(h).xi
        psi = solver.bilinearized(h, h).psi
        steps = [2e-1, 1e-1, 5e-2, 2.5e-2]
        increments = [stepper.solve(u + s * h, check_bounds=False).phi - base.phi for s in steps]
        remainders = [spacetime_norm(d - s * xi - 0.5 * s**2 * psi, grid, dt) for s, d in zip(steps, increments)]
        sizes = [spacetime_norm(d, grid, dt) for d in increments]
        assert taylor_order(steps, remainders, sizes) >= 2.7
