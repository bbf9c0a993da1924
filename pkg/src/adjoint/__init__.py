"""Discrete adjoint solver."""

from ..schemas import Targets
from .solver import AdjointSolver, AdjointTrajectory, solve_adjoint

__all__ = ["AdjointSolver", "AdjointTrajectory", "Targets", "solve_adjoint"]
