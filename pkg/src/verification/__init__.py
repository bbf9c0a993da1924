"""Finite-difference oracles and property suites."""

from ..schemas import OracleConfig
from .oracles import (
    FDEstimate,
    SmoothObjective,
    bisection_root,
    cost_oracle,
    fd_gradient,
    fd_second_difference,
    grid_minimize,
    observed_order,
    smooth_direction,
    taylor_order,
)
from .suites import (
    DEFAULT_SUITES,
    BasePropertySuite,
    CheckOutcome,
    SuiteContext,
    SuiteEngine,
    SuiteReport,
    SuiteResult,
    run_property_suites,
)

__all__ = [
    "DEFAULT_SUITES",
    "BasePropertySuite",
    "CheckOutcome",
    "FDEstimate",
    "OracleConfig",
    "SmoothObjective",
    "SuiteContext",
    "SuiteEngine",
    "SuiteReport",
    "SuiteResult",
    "bisection_root",
    "cost_oracle",
    "fd_gradient",
    "fd_second_difference",
    "grid_minimize",
    "observed_order",
    "run_property_suites",
    "smooth_direction",
    "taylor_order",
]
