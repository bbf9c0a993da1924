"""
Linearized and bilinearized state systems.

Both are discretized as the exact derivatives of the forward time step, with
f'' and f''' evaluated at the implicit level phi_{n+1} of the base
trajectory:

    v_{n+1}   = a v_n + (1 - a) h_n
    A_{n+1} xi_{n+1}  = B xi_n  - dt Lap v_{n+1}
    A_{n+1} psi_{n+1} = B psi_n + dt Lap (f'''(phi_{n+1}) xi^h_{n+1} xi^k_{n+1})

with A_{n+1} the forward Newton Jacobian at phi_{n+1} and B = I - tau Lap.
The z-component of the bilinearized system is identically zero.
"""

import hashlib
import logging
from dataclasses import dataclass
from threading import Lock
from typing import Optional

import numpy as np

from ..core import BandedOperator, solve_banded
from ..schemas import ControlProblem
from ..state import StateSolver, StateTrajectory

logger = logging.getLogger("vch_control.sensitivity")


@dataclass
class LinearizedTrajectory:
    """xi, eta, v on time levels 0..N."""

    xi: np.ndarray
    eta: np.ndarray
    v: np.ndarray


@dataclass
class BilinearizedTrajectory:
    """psi, nu, z on time levels 0..N; z is stored as exact zeros."""

    psi: np.ndarray
    nu: np.ndarray
    z: np.ndarray


def _increment_key(h: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(h).tobytes()).hexdigest()[:16]


class SensitivitySolver:
    """
    Directional derivatives of the control-to-state map around one base
    trajectory. Per-level Jacobians are assembled once.
    """

    def __init__(
        self,
        problem: ControlProblem,
        base: StateTrajectory,
        cache: bool = False,
        laplacian: Optional[BandedOperator] = None,
    ) -> None:
        self.problem = problem
        self.base = base
        self.grid = problem.grid
        self.dt = problem.dt
        self.tau = problem.phys.tau
        self.decay = problem.phys.decay
        self.stepper = StateSolver(problem, laplacian=laplacian)
        self.laplacian = self.stepper.laplacian
        self.viscous = self.stepper.viscous

        n_steps = problem.n_steps
        self.curvature = self.stepper.potential.d2(base.phi)
        self.third = self.stepper.potential.d3(base.phi)
        self.jacobians: list[Optional[BandedOperator]] = [None] + [
            self.stepper.step_jacobian(base.phi[n]) for n in range(1, n_steps + 1)
        ]

        self._cache: Optional[dict[str, LinearizedTrajectory]] = {} if cache else None
        self._lock = Lock()

    def _recentre(self, field: np.ndarray) -> np.ndarray:
        # mean is zero in exact arithmetic; drop the banded-LU roundoff
        return field - np.mean(field)

    def _chemical_increment(self, x_next, x_prev, n, source) -> np.ndarray:
        """tau (x_{n} - x_{n-1})/dt - Lap x_n + f''(phi_n) x_n + source."""
        return (
            self.tau * (x_next - x_prev) / self.dt
            - self.laplacian.matvec(x_next)
            + self.curvature[n] * x_next
            + source
        )

    def linearized(self, h: np.ndarray) -> LinearizedTrajectory:
        """Solve the linearized system for the control increment h."""
        h = self.problem.check_control(h, "increment")
        key = None
        if self._cache is not None:
            key = _increment_key(h)
            with self._lock:
                cached = self._cache.get(key)
            if cached is not None:
                return cached

        n_steps, n_cells = self.problem.control_shape
        xi = np.zeros((n_steps + 1, n_cells))
        eta = np.zeros_like(xi)
        v = np.zeros_like(xi)
        for n in range(n_steps):
            v[n + 1] = self.decay * v[n] + (1.0 - self.decay) * h[n]
            rhs = self.viscous.matvec(xi[n]) - self.dt * self.laplacian.matvec(v[n + 1])
            xi[n + 1] = self._recentre(solve_banded(self.jacobians[n + 1], rhs))
            eta[n + 1] = self._chemical_increment(xi[n + 1], xi[n], n + 1, -v[n + 1])

        result = LinearizedTrajectory(xi=xi, eta=eta, v=v)
        if self._cache is not None and key is not None:
            with self._lock:
                self._cache[key] = result
        return result

    def bilinearized(
        self,
        h: np.ndarray,
        k: np.ndarray,
        xi_h: Optional[np.ndarray] = None,
        xi_k: Optional[np.ndarray] = None,
    ) -> BilinearizedTrajectory:
        """Second directional derivative along (h, k)."""
        if xi_h is None:
            xi_h = self.linearized(h).xi
        if xi_k is None:
            xi_k = xi_h if k is h else self.linearized(k).xi

        n_steps, n_cells = self.problem.control_shape
        psi = np.zeros((n_steps + 1, n_cells))
        nu = np.zeros_like(psi)
        for n in range(n_steps):
            source = self.third[n + 1] * (xi_h[n + 1] * xi_k[n + 1])
            rhs = self.viscous.matvec(psi[n]) + self.dt * self.laplacian.matvec(source)
            psi[n + 1] = self._recentre(solve_banded(self.jacobians[n + 1], rhs))
            nu[n + 1] = self._chemical_increment(psi[n + 1], psi[n], n + 1, source)

        return BilinearizedTrajectory(psi=psi, nu=nu, z=np.zeros_like(psi))


def solve_linearized(h: np.ndarray, base: StateTrajectory, problem: ControlProblem) -> LinearizedTrajectory:
    return SensitivitySolver(problem, base).linearized(h)


def solve_bilinearized(
    h: np.ndarray,
    k: np.ndarray,
    base: StateTrajectory,
    problem: ControlProblem,
) -> BilinearizedTrajectory:
    return SensitivitySolver(problem, base).bilinearized(h, k)
