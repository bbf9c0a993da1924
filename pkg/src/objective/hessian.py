"""
Second derivative of the smooth reduced cost.

    form(h, k) = sum_{n=1..N} dt h sum_i (b1 - f'''(phi_n) q_{n-1}) xi^h_n xi^k_n
               + b2 h sum_i xi^h_N xi^k_N + b3 dt h sum h k

q_{n-1} is the adjoint component paired with level n by the backward sweep.
"""

from typing import Optional

import numpy as np

from ..adjoint import AdjointTrajectory
from ..schemas import ControlProblem
from ..sensitivity import SensitivitySolver
from ..state import StateTrajectory


def _sensitivity(problem, base, sensitivity: Optional[SensitivitySolver]) -> SensitivitySolver:
    return sensitivity if sensitivity is not None else SensitivitySolver(problem, base)


def hessian_quadratic_form(
    u: np.ndarray,
    h: np.ndarray,
    k: np.ndarray,
    base: StateTrajectory,
    adjoint: AdjointTrajectory,
    problem: ControlProblem,
    sensitivity: Optional[SensitivitySolver] = None,
) -> float:
    """Evaluate the second derivative along (h, k) from two linearized solves."""
    problem.check_control(u)
    solver = _sensitivity(problem, base, sensitivity)
    xi_h = solver.linearized(h).xi
    xi_k = xi_h if k is h else solver.linearized(k).xi

    weights = problem.weights
    cell = problem.grid.h
    dt = problem.dt
    coefficient = weights.b1 - solver.third[1:] * adjoint.q[:-1]
    tracking = dt * cell * np.sum(coefficient * xi_h[1:] * xi_k[1:])
    terminal = weights.b2 * cell * np.sum(xi_h[-1] * xi_k[-1])
    control = weights.b3 * dt * cell * np.sum(np.asarray(h) * np.asarray(k))
    return float(tracking + terminal + control)


def hessian_tracking_terms(
    h: np.ndarray,
    base: StateTrajectory,
    problem: ControlProblem,
    sensitivity: Optional[SensitivitySolver] = None,
) -> float:
    """
    form(h, h) - b3 ||h||^2 computed without the adjoint:
    b1 ||xi||^2_Q + b2 ||xi_N||^2 + b1 <e, psi>_Q + b2 <e_N, psi_N>, psi = bilinearized(h, h).
    """
    solver = _sensitivity(problem, base, sensitivity)
    xi = solver.linearized(h).xi
    psi = solver.bilinearized(h, h, xi_h=xi, xi_k=xi).psi

    weights = problem.weights
    targets = problem.targets
    cell = problem.grid.h
    dt = problem.dt
    error = base.phi[1:] - targets.phi_Q[1:]
    terminal_error = base.phi[-1] - targets.phi_Omega
    return float(
        weights.b1 * dt * cell * (np.sum(xi[1:] ** 2) + np.sum(error * psi[1:]))
        + weights.b2 * cell * (np.sum(xi[-1] ** 2) + np.sum(terminal_error * psi[-1]))
    )
