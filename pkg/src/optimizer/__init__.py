"""Proximal gradient optimizer, kappa sweep and second-order checks."""

from ..schemas import OptimizerConfig
from .proximal import IterationRecord, OptimizerError, OptimizerReport, ProximalGradientSolver, minimize
from .sweep import SweepResult, SweepRow, annihilation_threshold, kappa_sweep
from .second_order import (
    DirectionRecord,
    GrowthSample,
    SecondOrderReport,
    quadratic_growth_samples,
    second_order_check,
)

__all__ = [
    "DirectionRecord",
    "GrowthSample",
    "IterationRecord",
    "OptimizerConfig",
    "OptimizerError",
    "OptimizerReport",
    "ProximalGradientSolver",
    "SecondOrderReport",
    "SweepResult",
    "SweepRow",
    "annihilation_threshold",
    "kappa_sweep",
    "minimize",
    "quadratic_growth_samples",
    "second_order_check",
]
