"""Forward state solver and separation diagnostics."""

from ..schemas import InitialData, PhysParams
from .separation import SeparationReport, separation_report
from .solver import (
    MassConservationError,
    NewtonDiverged,
    SeparationBreach,
    StateSolver,
    StateSolverError,
    StateTrajectory,
    StepResult,
    solve_state,
    step_state,
    step_w,
)

__all__ = [
    "InitialData",
    "MassConservationError",
    "NewtonDiverged",
    "PhysParams",
    "SeparationBreach",
    "SeparationReport",
    "StateSolver",
    "StateSolverError",
    "StateTrajectory",
    "StepResult",
    "separation_report",
    "solve_state",
    "step_state",
    "step_w",
]
