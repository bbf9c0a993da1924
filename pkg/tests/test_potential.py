"""
Potential Tests

Logarithmic potential, its derivatives, the resolvent and the
Moreau-Yosida envelope, checked against scalar oracles.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.potential import (
    LogarithmicPotential,
    PotentialDomainError,
    PotentialParams,
    f1_deriv,
    f1_value,
    f2_value,
    f_deriv,
    f_value,
    resolvent,
    yosida_deriv,
    yosida_second_deriv,
    yosida_value,
)
from src.verification import bisection_root, grid_minimize


@pytest.fixture
def params() -> PotentialParams:
    return PotentialParams(c1=1.0, c2=2.5)


@pytest.mark.unit
class TestPotentialParams:

    def test_requires_nonconvex_split(self):
        with pytest.raises(ValidationError):
            PotentialParams(c1=1.0, c2=1.0)

    def test_frozen(self, params):
        with pytest.raises(ValidationError):
            params.c1 = 3.0


@pytest.mark.unit
class TestExactPotential:
    """Tests for f, f' and the domain rules."""

    def test_value_at_origin(self, params):
        assert f_value(0.0, params) == 0.0

    def test_value_at_pure_phase(self):
        p = PotentialParams(c1=1.0, c2=2.0)
        assert f_value(1.0, p) == pytest.approx(2.0 * math.log(2.0) - 2.0, abs=1e-14)
        assert f_value(-1.0, p) == pytest.approx(-0.61371, abs=1e-5)

    def test_value_outside_is_infinite(self, params):
        assert f_value(1.5, params) == math.inf
        assert np.all(np.isinf(f_value(np.array([-2.0, 1.0 + 1e-12]), params)))

    def test_derivative_matches_central_difference(self, params):
        step = 1e-6
        fd = (f_value(0.5 + step, params) - f_value(0.5 - step, params)) / (2 * step)
        assert abs(f_deriv(0.5, 1, params) - fd) / abs(fd) <= 1e-6

    @pytest.mark.parametrize("order", [2, 3])
    def test_higher_derivatives_match_central_difference(self, params, order):
        step = 1e-5
        r = 0.3
        fd = (f_deriv(r + step, order - 1, params) - f_deriv(r - step, order - 1, params)) / (2 * step)
        assert f_deriv(r, order, params) == pytest.approx(fd, rel=1e-8)

    def test_derivative_domain_error(self, params):
        with pytest.raises(PotentialDomainError):
            f_deriv(1.0, 1, params)
        with pytest.raises(PotentialDomainError):
            f1_deriv(np.array([0.0, -1.0]), 2, params)

    def test_invalid_order(self, params):
        with pytest.raises(ValueError):
            f_deriv(0.0, 4, params)

    def test_value_is_sum_of_convex_and_concave_parts(self, params):
        r = np.linspace(-0.99, 0.99, 41)
        np.testing.assert_allclose(f_value(r, params), f1_value(r, params) + f2_value(r, params), rtol=0, atol=1e-15)

    def test_vectorized_returns_array(self, params):
        out = f_deriv(np.array([-0.5, 0.0, 0.5]), 1, params)
        assert isinstance(out, np.ndarray)
        assert out[1] == 0.0
        assert out[0] == pytest.approx(-out[2])


@pytest.mark.unit
class TestResolvent:
    """Tests for (I + eps f1')^{-1}."""

    def test_matches_bisection_oracle(self, params):
        s, eps = 5.0, 0.1
        oracle = bisection_root(
            lambda x: x + eps * 2.0 * params.c1 * math.atanh(x) - s, -1.0 + 1e-15, 1.0 - 1e-15
        )
        assert resolvent(s, eps, params) == pytest.approx(oracle, abs=1e-12)

    @pytest.mark.parametrize("s", [-3.0, -0.4, 0.0, 0.7, 50.0])
    def test_solves_resolvent_equation(self, params, s):
        eps = 0.05
        r = resolvent(s, eps, params)
        if abs(r) < 1.0 - 1e-12:
            assert r + eps * f1_deriv(r, 1, params) == pytest.approx(s, abs=1e-10)
        else:
            assert abs(s) > 1.0

    def test_stays_strictly_inside_interval(self, params):
        values = np.asarray(resolvent(np.linspace(-100, 100, 401), 1e-3, params))
        assert np.all(np.abs(values) < 1.0)
        assert resolvent(-3.0, 0.05, params) > -1.0
        assert resolvent(50.0, 1e-3, params) < 1.0

    def test_saturated_value_has_finite_derivative(self, params):
        r = resolvent(50.0, 1e-3, params)
        assert math.isfinite(f1_deriv(r, 1, params))

    def test_rejects_bad_eps(self, params):
        with pytest.raises(ValueError):
            resolvent(0.0, 0.0, params)


@pytest.mark.unit
class TestMoreauYosida:
    """Tests for the regularized convex part."""

    @pytest.mark.parametrize("eps", [1e-1, 1e-2, 1e-3])
    def test_monotone_lipschitz_and_odd(self, params, eps):
        r = np.linspace(-3.0, 3.0, 3001)
        d = np.asarray(yosida_deriv(r, eps, params))
        slopes = np.diff(d) / np.diff(r)
        assert np.all(slopes >= -1e-12)
        assert np.max(slopes) <= 1.0 / eps * (1 + 1e-9)
        assert yosida_deriv(0.0, eps, params) == 0.0
        np.testing.assert_allclose(d, -d[::-1], atol=1e-8)

    @pytest.mark.parametrize("eps", [1e-1, 1e-2, 1e-3])
    def test_bounded_by_exact_derivative(self, params, eps):
        r = np.linspace(-0.999, 0.999, 2001)
        assert np.all(np.abs(yosida_deriv(r, eps, params)) <= np.abs(f1_deriv(r, 1, params)) * (1 + 1e-12))

    @pytest.mark.parametrize("eps", [1e-1, 1e-2])
    def test_envelope_between_zero_and_f1(self, params, eps):
        r = np.linspace(-0.999, 0.999, 2001)
        values = np.asarray(yosida_value(r, eps, params))
        assert np.all(values >= -1e-15)
        assert np.all(values <= np.asarray(f1_value(r, params)) + 1e-12)

    @pytest.mark.parametrize("r", [-2.0, -0.3, 0.0, 0.8, 1.5])
    def test_envelope_matches_grid_minimization(self, params, r):
        eps = 0.1
        _, oracle = grid_minimize(
            lambda s: (r - s) ** 2 / (2 * eps) + np.asarray(f1_value(s, params)), -1.0, 1.0
        )
        assert yosida_value(r, eps, params) == pytest.approx(oracle, abs=1e-8)

    @pytest.mark.parametrize("r", [-0.9, 0.0, 0.5])
    def test_consistency_as_eps_decreases(self, params, r):
        errors = [abs(yosida_deriv(r, eps, params) - f1_deriv(r, 1, params)) for eps in (1e-1, 1e-2, 1e-3)]
        assert errors[0] >= errors[1] >= errors[2]

    def test_second_derivative_matches_difference_quotient(self, params):
        eps, r, step = 1e-2, 0.97, 1e-5
        fd = (yosida_deriv(r + step, eps, params) - yosida_deriv(r - step, eps, params)) / (2 * step)
        assert yosida_second_deriv(r, eps, params) == pytest.approx(fd, rel=1e-4)
        assert yosida_second_deriv(5.0, eps, params) <= 1.0 / eps

    def test_regularized_potential_defined_outside(self, params):
        potential = LogarithmicPotential(params).with_eps(1e-3)
        assert potential.regularized
        assert np.all(np.isfinite(potential.d1(np.array([-1.5, 0.0, 1.5]))))
        with pytest.raises(ValueError):
            potential.d3(np.zeros(2))
