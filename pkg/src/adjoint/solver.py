"""
Discrete adjoint of the forward time stepping.

The backward sweep is the exact transpose of the linearized stepping, so
the reduced gradient r + b3 u is exact for the discrete objective. With
A_n the Newton Jacobian at phi_n and e_n = phi_n - phi_Q,n:

    combo_N = b2 (phi_N - phi_Omega),           r_N = 0
    for n = N..1:
        rhs        = combo_n + b1 dt e_n
        A_n q      = -Lap rhs
        combo_{n-1} = rhs - dt (-Lap q + f''(phi_n) q)
        q_{n-1} = q,  p_{n-1} = combo_{n-1} - tau q
        r_{n-1} = a r_n + (1 - a) q_{n-1}

Every p produced this way satisfies -Lap p = q without a Neumann solve.
At the terminal level (I - tau Lap) q_N = -Lap combo_N fixes (p_N, q_N).
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core import BandedOperator, solve_banded
from ..schemas import ControlProblem, CostWeights, Targets
from ..state import StateSolver, StateTrajectory

logger = logging.getLogger("vch_control.adjoint")


@dataclass
class AdjointTrajectory:
    """p, q, r and combo = p + tau q on time levels 0..N."""

    p: np.ndarray
    q: np.ndarray
    r: np.ndarray
    combo: np.ndarray

    @property
    def gradient_part(self) -> np.ndarray:
        """r on the control slabs 0..N-1 (r_N = 0 is not a control slab)."""
        return self.r[:-1]


class AdjointSolver:
    """Backward sweep around one base trajectory."""

    def __init__(
        self,
        problem: ControlProblem,
        base: StateTrajectory,
        laplacian: Optional[BandedOperator] = None,
        stepper: Optional[StateSolver] = None,
    ) -> None:
        self.problem = problem
        self.base = base
        self.stepper = stepper if stepper is not None else StateSolver(problem, laplacian=laplacian)
        self.laplacian = self.stepper.laplacian

    def solve(self, targets: Optional[Targets] = None, weights: Optional[CostWeights] = None) -> AdjointTrajectory:
        problem = self.problem
        targets = targets or problem.targets
        weights = weights or problem.weights
        targets.check(problem.grid, problem.n_steps)

        lap = self.laplacian
        dt = problem.dt
        tau = problem.phys.tau
        decay = problem.phys.decay
        phi = self.base.phi
        n_steps, n_cells = problem.control_shape

        p = np.zeros((n_steps + 1, n_cells))
        q = np.zeros_like(p)
        r = np.zeros_like(p)
        combo = np.zeros_like(p)

        combo[n_steps] = weights.b2 * (phi[n_steps] - targets.phi_Omega)
        if np.any(combo[n_steps]):
            q[n_steps] = solve_banded(lap, -lap.matvec(combo[n_steps]), shift=1.0, scale=-tau)
        p[n_steps] = combo[n_steps] - tau * q[n_steps]

        curvature = self.stepper.potential.d2(phi)
        for n in range(n_steps, 0, -1):
            rhs = combo[n] + weights.b1 * dt * (phi[n] - targets.phi_Q[n])
            if np.any(rhs):
                q_n = solve_banded(self.stepper.step_jacobian(phi[n]), -lap.matvec(rhs))
            else:
                q_n = np.zeros(n_cells)
            combo[n - 1] = rhs - dt * (-lap.matvec(q_n) + curvature[n] * q_n)
            q[n - 1] = q_n
            p[n - 1] = combo[n - 1] - tau * q_n
            r[n - 1] = decay * r[n] + (1.0 - decay) * q_n

        logger.debug("adjoint sweep done: max|r| = %.3e", float(np.max(np.abs(r))))
        return AdjointTrajectory(p=p, q=q, r=r, combo=combo)


def solve_adjoint(
    base: StateTrajectory,
    targets: Targets,
    weights: CostWeights,
    problem: ControlProblem,
) -> AdjointTrajectory:
    """Backward adjoint sweep for the given targets and weights."""
    return AdjointSolver(problem, base).solve(targets, weights)
