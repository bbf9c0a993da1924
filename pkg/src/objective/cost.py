"""
Cost functional and reduced gradient.

All space-time integrals use cell sums value * h * dt; tracking runs over
time levels 1..N, the control over slabs 0..N-1.
"""

from typing import NamedTuple

import numpy as np

from ..adjoint import AdjointTrajectory
from ..schemas import ControlProblem, CostWeights, Targets
from ..state import StateTrajectory


class ShapeMismatchError(ValueError):
    """Raised when trajectories, controls and targets do not line up."""


class CostValue(NamedTuple):
    j_smooth: float
    g: float
    j_total: float


def l1_norm(u: np.ndarray, problem: ControlProblem) -> float:
    """G(u) = sum |u| h dt."""
    return float(np.sum(np.abs(u)) * problem.grid.h * problem.dt)


def evaluate_cost(
    state: StateTrajectory,
    u: np.ndarray,
    targets: Targets,
    weights: CostWeights,
    problem: ControlProblem,
) -> CostValue:
    """Return (J_smooth, G, J_total = J_smooth + kappa G)."""
    n_steps, n_cells = problem.control_shape
    if state.phi.shape != (n_steps + 1, n_cells):
        raise ShapeMismatchError(f"state has shape {state.phi.shape}, expected {(n_steps + 1, n_cells)}")
    if np.shape(u) != (n_steps, n_cells):
        raise ShapeMismatchError(f"control has shape {np.shape(u)}, expected {(n_steps, n_cells)}")
    if targets.phi_Q.shape != state.phi.shape or targets.phi_Omega.shape != (n_cells,):
        raise ShapeMismatchError("targets do not match the discretization")

    h = problem.grid.h
    dt = problem.dt
    tracking = np.sum((state.phi[1:] - targets.phi_Q[1:]) ** 2) * h * dt
    terminal = np.sum((state.phi[-1] - targets.phi_Omega) ** 2) * h
    control = np.sum(np.asarray(u) ** 2) * h * dt

    j_smooth = 0.5 * (weights.b1 * tracking + weights.b2 * terminal + weights.b3 * control)
    g = l1_norm(u, problem)
    return CostValue(j_smooth=float(j_smooth), g=g, j_total=float(j_smooth + weights.kappa * g))


def reduced_gradient(u: np.ndarray, adjoint: AdjointTrajectory, weights: CostWeights) -> np.ndarray:
    """Gradient of the smooth reduced cost: r + b3 u (kappa handled by the prox)."""
    r = adjoint.gradient_part
    if r.shape != np.shape(u):
        raise ShapeMismatchError(f"adjoint r has shape {r.shape}, control {np.shape(u)}")
    return r + weights.b3 * np.asarray(u)
