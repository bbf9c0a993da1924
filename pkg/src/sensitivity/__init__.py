"""Linearized and bilinearized sensitivity systems."""

from .linearized import (
    BilinearizedTrajectory,
    LinearizedTrajectory,
    SensitivitySolver,
    solve_bilinearized,
    solve_linearized,
)

__all__ = [
    "BilinearizedTrajectory",
    "LinearizedTrajectory",
    "SensitivitySolver",
    "solve_bilinearized",
    "solve_linearized",
]
