"""
Verification Tests

Finite-difference oracles and the property-suite engine.
"""

import numpy as np
import pytest

from src.core import mean_value
from src.optimizer import OptimizerConfig
from src.schemas import OracleConfig, ProblemSpec, SecondOrderConfig
from src.verification import (
    BasePropertySuite,
    SuiteContext,
    SuiteEngine,
    SuiteResult,
    bisection_root,
    fd_gradient,
    fd_second_difference,
    grid_minimize,
    observed_order,
    run_property_suites,
    smooth_direction,
    taylor_order,
)


@pytest.fixture
def quick_oracle() -> OracleConfig:
    return OracleConfig(random_controls=2, seeds=[0, 1], taylor_directions=2, potential_samples=3000)


@pytest.mark.unit
class TestScalarOracles:
    """Tests for the scalar helpers."""

    def test_observed_order_of_power_law(self):
        steps = [1e-1, 1e-2, 1e-3]
        assert observed_order(steps, [3.0 * s**2 for s in steps]) == pytest.approx(2.0, abs=1e-12)

    def test_observed_order_tolerates_zero_errors(self):
        assert np.isfinite(observed_order([1e-1, 1e-2], [0.0, 0.0]))

    def test_taylor_order_drops_roundoff_floor(self):
        steps = [1e-1, 1e-2, 1e-3, 1e-4]
        increments = list(steps)
        remainders = [s**2 for s in steps[:3]] + [1e-22]
        assert taylor_order(steps, remainders, increments) == pytest.approx(2.0, abs=1e-12)

    def test_taylor_order_needs_two_steps_above_floor(self):
        assert np.isnan(taylor_order([1e-1, 1e-2, 1e-3], [1e-2, 0.0, 0.0], [1e-1, 1e-2, 1e-3]))

    def test_bisection_root(self):
        assert bisection_root(lambda x: x**3 - 2.0, 0.0, 2.0) == pytest.approx(2.0 ** (1.0 / 3.0), abs=1e-14)

    def test_grid_minimize(self):
        x, value = grid_minimize(lambda x: (x - 0.3) ** 2 + 1.0, -1.0, 1.0)
        assert x == pytest.approx(0.3, abs=1e-7)
        assert value == pytest.approx(1.0, abs=1e-14)


@pytest.mark.unit
class TestSmoothDirection:
    """Tests for the low-mode Taylor directions."""

    def test_shape_and_scale(self, small_problem, rng):
        h = smooth_direction(small_problem, rng)
        assert h.shape == small_problem.control_shape
        assert np.max(np.abs(h)) == pytest.approx(1.0, abs=1e-15)

    def test_spatial_mean_free(self, small_problem, rng):
        h = smooth_direction(small_problem, rng)
        assert np.max(np.abs(mean_value(h, small_problem.grid))) <= 1e-12

    def test_seeded(self, small_problem):
        first = smooth_direction(small_problem, np.random.default_rng(3))
        second = smooth_direction(small_problem, np.random.default_rng(3))
        np.testing.assert_array_equal(first, second)


@pytest.mark.integration
class TestFiniteDifferences:
    """Tests for the step-scanning finite-difference oracles."""

    def test_zero_direction(self, small_problem, random_control):
        zero = small_problem.zero_control()
        assert fd_gradient(random_control, zero, small_problem).value == 0.0
        assert fd_second_difference(random_control, zero, small_problem).value == 0.0

    def test_control_only_cost_is_exact_quadratic(self, small_problem, random_control, rng):
        problem = small_problem.with_weights(b1=0.0, b2=0.0)
        h = rng.uniform(-1.0, 1.0, problem.control_shape)
        measure = problem.grid.h * problem.dt
        expected_gradient = problem.weights.b3 * measure * float(np.sum(random_control * h))
        expected_second = problem.weights.b3 * measure * float(np.sum(h * h))
        estimate = fd_gradient(random_control, h, problem)
        assert estimate.value == pytest.approx(expected_gradient, rel=1e-8, abs=1e-12)
        assert fd_second_difference(random_control, h, problem).value == pytest.approx(expected_second, rel=1e-6)
        assert len(estimate.scan) == len(OracleConfig().fd_steps)


class _RaisingSuite(BasePropertySuite):
    name = "raising"

    def run(self, context):
        raise RuntimeError("boom")


class _SkippingSuite(BasePropertySuite):
    name = "skipping"

    def run(self, context):
        result = SuiteResult(self.name)
        result.skip("everything", "nothing to check")
        return result


@pytest.mark.unit
class TestSuiteEngine:
    """Tests for outcome bookkeeping."""

    def test_status_rules(self):
        result = SuiteResult("demo")
        assert result.status == "fail"
        result.add_check("a", True, metric=1.0, threshold=2.0)
        assert result.status == "pass"
        result.add_check("b", False)
        assert result.status == "fail"

    def test_notes_do_not_change_status(self):
        result = SuiteResult("demo")
        result.note("diagnostic", metric=3.0, detail="reported only")
        assert result.status == "fail"
        result.add_check("a", True)
        result.note("another")
        assert result.status == "pass"
        assert [c.status for c in result.checks] == ["info", "pass", "info"]

    def test_exceptions_become_failures(self, small_problem, quick_oracle):
        context = SuiteContext(small_problem, quick_oracle, OptimizerConfig(), SecondOrderConfig())
        report = SuiteEngine([_RaisingSuite(), _SkippingSuite()]).run(context)
        assert not report.passed
        assert report.status_of("raising") == "fail"
        assert report.status_of("skipping") == "skipped"
        assert "RuntimeError: boom" in report.rows()[0]["detail"]
        assert "SUITE FAILURES PRESENT" in report.summary_text()

    def test_unknown_suite_name(self, small_problem):
        with pytest.raises(ValueError):
            run_property_suites(small_problem, suites=["nonexistent"])


@pytest.mark.integration
class TestPropertySuites:
    """Tests running real suites on the small instance."""

    def test_structural_suites_pass(self, small_problem, quick_oracle):
        report = run_property_suites(
            small_problem, quick_oracle, suites=["potential", "conservation", "separation"], seed=7
        )
        assert report.passed, report.summary_text()
        rows = report.rows()
        assert {"suite", "check", "status", "metric", "threshold", "detail", "seed"} <= set(rows[0])

    def test_separation_reports_margin_diagnostics(self, small_problem, quick_oracle):
        report = run_property_suites(small_problem, quick_oracle, suites=["separation"], seed=7)
        rows = report.rows()
        evolved = [r for r in rows if r["check"].startswith("evolved margin")]
        margins = [r for r in rows if r["check"].startswith("margin control")]
        assert evolved and len(evolved) == len(margins)
        assert all(r["status"] == "info" for r in evolved)
        table = [r for r in rows if r["check"] == "margin against control size"]
        assert len(table) == 1
        assert table[0]["status"] == "info"
        assert table[0]["metric"] >= 0.0
        assert table[0]["detail"].count("|u|=") == 5

    def test_mutation_is_detected(self, small_problem, quick_oracle):
        report = run_property_suites(small_problem, quick_oracle, suites=["conservation"], mutate=True)
        assert not report.passed
        assert report.mutated
        assert report.status_of("conservation") == "fail"

    def test_derivative_suites_pass(self, small_problem, quick_oracle):
        report = run_property_suites(
            small_problem, quick_oracle, suites=["linearized", "bilinearized", "adjoint", "hessian"]
        )
        assert report.passed, report.summary_text()

    @pytest.mark.slow
    def test_all_suites_pass_on_small_instance(self, small_problem, quick_oracle):
        second_order = SecondOrderConfig(n_dirs=8, fd_crosscheck=1, growth_samples=4)
        report = run_property_suites(small_problem, quick_oracle, second_order=second_order, n_workers=2)
        assert report.passed, report.summary_text()
        assert "ALL SUITES PASSED" in report.summary_text()


@pytest.mark.slow
def test_default_instance_acceptance():
    """Every suite on the default instance (n_cells=128, n_steps=256)."""
    problem = ProblemSpec().discretize().with_weights(kappa=1e-3)
    report = run_property_suites(problem, OracleConfig(), seed=0)
    assert report.passed, report.summary_text()
