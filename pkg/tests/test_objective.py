"""
Objective Tests

Cost evaluation, the pointwise prox, the L1 multiplier, sparsity
reporting, the critical-cone surrogate and the second-derivative form.
"""

import numpy as np
import pytest

from src.adjoint import AdjointSolver, Targets
from src.core import spacetime_inner
from src.objective import (
    KAPPA_ZERO,
    ShapeMismatchError,
    critical_cone_mask,
    evaluate_cost,
    hessian_quadratic_form,
    hessian_tracking_terms,
    l1_norm,
    project_to_critical_cone,
    prox_point,
    reduced_gradient,
    soft_threshold,
    sparsity_report,
    stationarity_residual,
    subgradient_lambda,
)
from src.schemas import BoxBounds, CostWeights
from src.sensitivity import SensitivitySolver
from src.state import StateSolver
from src.verification import cost_oracle, fd_second_difference, grid_minimize


@pytest.mark.unit
class TestCost:
    """Tests for J_smooth, G and J_total."""

    def test_zero_for_perfect_tracking(self, small_problem):
        state = StateSolver(small_problem).solve(small_problem.zero_control())
        targets = Targets(phi_Q=state.phi.copy(), phi_Omega=state.phi[-1].copy())
        cost = evaluate_cost(state, small_problem.zero_control(), targets, small_problem.weights.model_copy(update={"b2": 0.0}), small_problem)
        assert cost.j_total == 0.0

    def test_constant_control_only(self, small_problem):
        weights = CostWeights(b1=0.0, b2=0.0, b3=0.02, kappa=0.3)
        u = np.full(small_problem.control_shape, -1.5)
        state = StateSolver(small_problem).solve(u)
        cost = evaluate_cost(state, u, small_problem.targets, weights, small_problem)
        measure = small_problem.measure
        assert cost.j_total == pytest.approx(0.5 * 0.02 * 2.25 * measure + 0.3 * 1.5 * measure, rel=1e-13)
        assert cost.g == pytest.approx(1.5 * measure, rel=1e-13)

    def test_matches_summation_oracle(self, small_problem, random_control):
        state = StateSolver(small_problem).solve(random_control)
        cost = evaluate_cost(state, random_control, small_problem.targets, small_problem.weights, small_problem)
        oracle = cost_oracle(state, random_control, small_problem)
        assert cost.j_smooth == pytest.approx(oracle.j_smooth, rel=1e-12)
        assert cost.g == pytest.approx(oracle.g, rel=1e-12)

    def test_l1_positively_homogeneous(self, small_problem, random_control):
        assert l1_norm(3.0 * random_control, small_problem) == pytest.approx(3.0 * l1_norm(random_control, small_problem), rel=1e-14)

    def test_shape_mismatch(self, small_problem):
        state = StateSolver(small_problem).solve(small_problem.zero_control())
        with pytest.raises(ShapeMismatchError):
            evaluate_cost(state, np.zeros((2, 16)), small_problem.targets, small_problem.weights, small_problem)

    def test_gradient_without_tracking_is_control_term(self, small_problem, random_control):
        problem = small_problem.with_weights(b1=0.0, b2=0.0)
        stepper = StateSolver(problem)
        adjoint = AdjointSolver(problem, stepper.solve(random_control), stepper=stepper).solve()
        np.testing.assert_array_equal(reduced_gradient(random_control, adjoint, problem.weights), problem.weights.b3 * random_control)


@pytest.mark.unit
class TestProx:
    """Tests for the pointwise proximal map."""

    def test_soft_threshold(self):
        np.testing.assert_array_equal(soft_threshold(np.array([-3.0, -0.5, 0.0, 0.5, 3.0]), 1.0), [-2.0, 0.0, 0.0, 0.0, 2.0])

    def test_zero_stays_zero_inside_band(self):
        weights = CostWeights(b3=0.1, kappa=0.5)
        for r in (-0.5, -0.2, 0.0, 0.4999):
            assert prox_point(r, 0.0, 1.0, weights, -5.0, 5.0) == 0.0

    @pytest.mark.parametrize("alpha", [0.1, 1.0, 10.0])
    def test_fixed_point_of_pointwise_problem(self, alpha):
        weights = CostWeights(b3=0.1, kappa=0.2)
        lb, ub = -2.0, 3.0
        for r in (-1.0, -0.25, 0.05, 0.7):
            v_star, _ = grid_minimize(lambda v: 0.5 * weights.b3 * v**2 + weights.kappa * np.abs(v) + r * v, lb, ub)
            g_r = r + weights.b3 * v_star
            assert prox_point(g_r, v_star, alpha, weights, lb, ub) == pytest.approx(v_star, abs=1e-6)

    def test_analytic_interior_stationary_value(self):
        weights = CostWeights(b3=0.1, kappa=0.2)
        c = 1.5
        r = -(weights.kappa + weights.b3 * c)
        v_star, _ = grid_minimize(lambda v: 0.5 * weights.b3 * v**2 + weights.kappa * np.abs(v) + r * v, -5.0, 5.0)
        assert v_star == pytest.approx(c, abs=1e-6)
        assert prox_point(r + weights.b3 * c, c, 1.0 / weights.b3, weights, -5.0, 5.0) == pytest.approx(c, abs=1e-12)

    def test_nonexpansive(self, rng):
        weights = CostWeights(b3=0.1, kappa=0.3)
        a, b = rng.standard_normal(1000) * 3, rng.standard_normal(1000) * 3
        pa = prox_point(np.zeros(1000), a, 1.0, weights, -2.0, 2.0)
        pb = prox_point(np.zeros(1000), b, 1.0, weights, -2.0, 2.0)
        assert np.all(np.abs(pa - pb) <= np.abs(a - b) + 1e-15)

    def test_box_clipping(self):
        weights = CostWeights(b3=0.1, kappa=0.0)
        assert prox_point(-100.0, 0.0, 1.0, weights, -1.0, 2.0) == 2.0
        assert prox_point(100.0, 0.0, 1.0, weights, -1.0, 2.0) == -1.0

    def test_invalid_arguments(self):
        weights = CostWeights()
        with pytest.raises(ValueError):
            prox_point(0.0, 0.0, 0.0, weights, -1.0, 1.0)
        with pytest.raises(ValueError):
            prox_point(0.0, 0.0, 1.0, weights, 1.0, -1.0)

    def test_stationarity_residual_zero_at_fixed_point(self):
        weights = CostWeights(b3=0.1, kappa=0.2)
        u = np.array([0.0, 1.5])
        r = np.array([0.1, -(0.2 + 0.1 * 1.5)])
        assert stationarity_residual(u, r, weights, -5.0, 5.0) <= 1e-14


@pytest.mark.unit
class TestSubgradient:
    """Tests for the L1 multiplier."""

    def test_sign_off_zero_set(self):
        weights = CostWeights(b3=0.1, kappa=0.5)
        lam = subgradient_lambda(np.array([2.0, -1.0, 0.0, 0.0]), np.array([9.0, 9.0, 0.0, -0.2]), weights)
        np.testing.assert_allclose(lam, [1.0, -1.0, 0.0, 0.4])

    def test_clipped_to_unit_interval(self):
        weights = CostWeights(b3=0.1, kappa=0.5)
        lam = subgradient_lambda(np.zeros(2), np.array([-10.0, 10.0]), weights)
        np.testing.assert_array_equal(lam, [1.0, -1.0])

    def test_undefined_without_l1_term(self):
        with pytest.raises(ValueError):
            subgradient_lambda(np.zeros(2), np.zeros(2), CostWeights(kappa=0.0))


@pytest.mark.unit
class TestSparsityReport:
    """Tests for the sparsity equivalence counts."""

    def test_counts_both_directions(self):
        weights = CostWeights(b3=0.1, kappa=0.5)
        u = np.array([0.0, 0.0, 1.0, 2.0, 0.0])
        r = np.array([0.1, 0.9, 0.2, -0.6, -0.5])
        report = sparsity_report(u, r, weights, tol_u=1e-10, delta=1e-6)
        assert report.zero_fraction == pytest.approx(0.6)
        assert report.violations_a == 1
        assert report.violations_b == 1

    def test_all_zero_above_threshold(self):
        weights = CostWeights(b3=0.1, kappa=1.0)
        report = sparsity_report(np.zeros((4, 4)), np.full((4, 4), 0.9), weights)
        assert report.zero_fraction == 1.0
        assert report.violations_a == report.violations_b == 0

    def test_skipped_without_l1_term(self):
        report = sparsity_report(np.array([0.0, 1e-12, 1.0]), np.zeros(3), CostWeights(kappa=0.0))
        assert report.skipped
        assert report.zero_fraction == pytest.approx(1.0 / 3.0)
        row = report.with_cost(1.0, 2.0).to_row()
        assert row["violations_a"] == "skipped"
        assert set(row) == {"kappa", "zero_fraction", "violations_a", "violations_b", "J_total", "norm_u_L1"}
        assert KAPPA_ZERO > 0


@pytest.mark.unit
class TestCriticalCone:
    """Tests for the critical-cone surrogate."""

    def test_sign_rules(self):
        weights = CostWeights(b3=0.1, kappa=0.5)
        bounds = BoxBounds(u_lb=-1.0, u_ub=1.0)
        u = np.array([0.0, 0.0, 0.0, 0.3, -1.0, 1.0])
        r = np.array([0.2, 0.5, -0.5, -0.53, 0.6, -0.6])
        mask = critical_cone_mask(u, r, weights, bounds, tol_u=1e-10, delta=1e-6)
        assert mask.zero[0]
        assert mask.nonpositive[1]
        assert mask.nonnegative[2]
        assert mask.free[3]
        assert mask.nonnegative[4]
        assert mask.nonpositive[5]
        assert sum(mask.size().values()) == 6

    def test_projection(self):
        weights = CostWeights(b3=0.1, kappa=0.5)
        bounds = BoxBounds(u_lb=-1.0, u_ub=1.0)
        mask = critical_cone_mask(np.array([0.0, 0.0, 0.3]), np.array([0.2, 0.5, -0.53]), weights, bounds, delta=1e-6)
        np.testing.assert_array_equal(project_to_critical_cone(np.array([1.0, 1.0, -2.0]), mask), [0.0, 0.0, -2.0])


@pytest.mark.integration
class TestQuadraticForm:
    """Tests for the second derivative of the smooth reduced cost."""

    @pytest.fixture
    def form_setup(self, small_problem, random_control):
        stepper = StateSolver(small_problem)
        base = stepper.solve(random_control)
        adjoint = AdjointSolver(small_problem, base, stepper=stepper).solve()
        sensitivity = SensitivitySolver(small_problem, base, cache=True)
        return random_control, base, adjoint, sensitivity

    def test_zero_direction(self, small_problem, form_setup):
        u, base, adjoint, sensitivity = form_setup
        zero = small_problem.zero_control()
        assert hessian_quadratic_form(u, zero, zero, base, adjoint, small_problem, sensitivity) == 0.0

    def test_symmetric(self, small_problem, form_setup, rng):
        u, base, adjoint, sensitivity = form_setup
        h = rng.standard_normal(small_problem.control_shape)
        k = rng.standard_normal(small_problem.control_shape)
        hk = hessian_quadratic_form(u, h, k, base, adjoint, small_problem, sensitivity)
        kh = hessian_quadratic_form(u, k, h, base, adjoint, small_problem, sensitivity)
        assert abs(hk - kh) <= 1e-12 * max(1.0, abs(hk))

    def test_tracking_identity(self, small_problem, form_setup, rng):
        u, base, adjoint, sensitivity = form_setup
        h = rng.uniform(-1, 1, small_problem.control_shape)
        form = hessian_quadratic_form(u, h, h, base, adjoint, small_problem, sensitivity)
        control = small_problem.weights.b3 * spacetime_inner(h, h, small_problem.grid, small_problem.dt)
        tracking = hessian_tracking_terms(h, base, small_problem, sensitivity)
        assert form - control == pytest.approx(tracking, rel=1e-10)

    def test_matches_second_difference(self, small_problem, form_setup, rng):
        u, base, adjoint, sensitivity = form_setup
        h = rng.uniform(-1, 1, small_problem.control_shape)
        form = hessian_quadratic_form(u, h, h, base, adjoint, small_problem, sensitivity)
        estimate = fd_second_difference(u, h, small_problem)
        assert abs(form - estimate.value) / max(1.0, abs(form)) <= 1e-4
