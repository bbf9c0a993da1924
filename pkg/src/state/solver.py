"""
Forward solver for the viscous Cahn-Hilliard state system.

Time stepping (backward Euler in phi, mu and f'(phi); exact exponential
update for w with piecewise-constant control):

    w_{n+1}   = a w_n + (1 - a) u_n,                a = exp(-dt / gamma)
    phi_{n+1} = phi_n + dt Lap mu_{n+1}
    mu_{n+1}  = tau (phi_{n+1} - phi_n)/dt - Lap phi_{n+1} + f'(phi_{n+1}) - w_{n+1}

Newton runs on phi alone after eliminating mu. Its Jacobian

    A(phi) = I - dt Lap (tau/dt I - Lap + diag f''(phi))

is pentadiagonal; one banded LU per iteration. Mean conservation follows
from the zero row sums of Lap, so steps are never clipped: the
fraction-to-boundary rule keeps iterates inside (-1, 1) instead.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core import BandedOperator, SingularSystemError, mean_value, neumann_laplacian, solve_banded
from ..metrics.telemetry import SolverTelemetry, telemetry as default_telemetry
from ..potential import LogarithmicPotential
from ..schemas import ControlProblem
from .separation import SeparationReport, separation_report

logger = logging.getLogger("vch_control.state")

# Sufficient decrease constant of the residual line search.
LINE_SEARCH_C = 1e-4
FRACTION_TO_BOUNDARY = 0.99
MIN_STEP = 1e-14


class StateSolverError(RuntimeError):
    """Base class for forward-solve failures; carries the failing time level."""

    def __init__(self, message: str, time_index: Optional[int] = None) -> None:
        super().__init__(message)
        self.time_index = time_index

    def at(self, time_index: int) -> "StateSolverError":
        self.time_index = time_index
        return self

    def __str__(self) -> str:
        base = super().__str__()
        return base if self.time_index is None else f"{base} (time level {self.time_index})"


class NewtonDiverged(StateSolverError):
    """Newton exhausted its iterations or its line search."""


class SeparationBreach(StateSolverError):
    """An iterate was forced against the +-1 barrier."""


class MassConservationError(StateSolverError):
    """The mean of phi drifted by more than the per-step tolerance."""


@dataclass
class StepResult:
    phi: np.ndarray
    mu: np.ndarray
    iterations: int
    backtracks: int
    fallback: bool


@dataclass
class StateTrajectory:
    """phi, mu, w on time levels 0..N, shape (N + 1, n_cells)."""

    phi: np.ndarray
    mu: np.ndarray
    w: np.ndarray
    separation: SeparationReport
    newton_iterations: np.ndarray

    @property
    def n_steps(self) -> int:
        return self.phi.shape[0] - 1

    def summary(self) -> dict:
        return {
            "n_steps": self.n_steps,
            "total_newton_iterations": int(np.sum(self.newton_iterations)),
            **self.separation.to_dict(),
        }


def step_w(w_n: np.ndarray, u_n: np.ndarray, dt: float, gamma: np.ndarray) -> np.ndarray:
    """Exact solution of gamma w' + w = u_n over one step."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    a = np.exp(-dt / np.asarray(gamma, dtype=np.float64))
    return a * w_n + (1.0 - a) * u_n


class StateSolver:
    """
    Owns the operators of one ControlProblem and advances the state.

    A solver instance is single-threaded; create one per worker.
    """

    def __init__(
        self,
        problem: ControlProblem,
        laplacian: Optional[BandedOperator] = None,
        telemetry: Optional[SolverTelemetry] = None,
    ) -> None:
        self.problem = problem
        self.grid = problem.grid
        self.config = problem.solver
        self.dt = problem.dt
        self.tau = problem.phys.tau
        self.decay = problem.phys.decay
        self.laplacian = laplacian if laplacian is not None else neumann_laplacian(self.grid)
        self.telemetry = telemetry if telemetry is not None else default_telemetry
        self.potential = LogarithmicPotential(problem.potential)

        # B = I - tau Lap, and the phi-independent part of A: B + dt Lap^2
        self.viscous = self.laplacian.shifted(1.0, -self.tau)
        self._jacobian_base = self.viscous + self.laplacian.compose(self.laplacian).scaled(self.dt)

    # =========================================================================
    # Step operators
    # =========================================================================

    def chemical_potential(
        self,
        phi: np.ndarray,
        phi_n: np.ndarray,
        w_next: np.ndarray,
        potential: Optional[LogarithmicPotential] = None,
    ) -> np.ndarray:
        potential = potential or self.potential
        return (
            self.tau * (phi - phi_n) / self.dt
            - self.laplacian.matvec(phi)
            + potential.d1(phi)
            - w_next
        )

    def step_residual(
        self,
        phi: np.ndarray,
        phi_n: np.ndarray,
        w_next: np.ndarray,
        potential: Optional[LogarithmicPotential] = None,
    ) -> tuple[np.ndarray, np.ndarray]:
        """Return (mu(phi), F(phi)) with F = phi - phi_n - dt Lap mu(phi)."""
        mu = self.chemical_potential(phi, phi_n, w_next, potential)
        return mu, phi - phi_n - self.dt * self.laplacian.matvec(mu)

    def step_jacobian(self, phi: np.ndarray, potential: Optional[LogarithmicPotential] = None) -> BandedOperator:
        """A(phi) = I - tau Lap + dt Lap^2 - dt Lap diag(f''(phi))."""
        potential = potential or self.potential
        curvature = self.laplacian.scale_columns(potential.d2(phi)).scaled(-self.dt)
        return self._jacobian_base + curvature

    # =========================================================================
    # Newton
    # =========================================================================

    def _boundary_step(self, phi: np.ndarray, delta: np.ndarray) -> float:
        bound = 1.0 - self.config.boundary_guard
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(
                delta > 0.0,
                (bound - phi) / delta,
                np.where(delta < 0.0, (-bound - phi) / delta, np.inf),
            )
        lam_max = float(np.min(ratios))
        if lam_max >= 1.0:
            return 1.0
        return FRACTION_TO_BOUNDARY * max(lam_max, 0.0)

    def _newton(
        self,
        phi_n: np.ndarray,
        w_next: np.ndarray,
        potential: LogarithmicPotential,
        start: np.ndarray,
    ) -> tuple[np.ndarray, int, int]:
        cfg = self.config
        guarded = not potential.regularized
        phi = start.copy()
        _, residual = self.step_residual(phi, phi_n, w_next, potential)
        backtracks = 0

        for iteration in range(1, cfg.max_iter + 1):
            fnorm = float(np.max(np.abs(residual)))
            delta = solve_banded(self.step_jacobian(phi, potential), -residual)
            dnorm = float(np.max(np.abs(delta)))
            lam = self._boundary_step(phi, delta) if guarded else 1.0

            if fnorm <= cfg.atol or dnorm <= cfg.step_tol:
                # final undamped correction, skipped if it would touch the barrier
                if lam == 1.0:
                    phi = phi + delta
                return phi, iteration, backtracks

            if lam < MIN_STEP:
                raise SeparationBreach(
                    f"Newton iterate pinned at the +-1 barrier (max |phi| = {np.max(np.abs(phi)):.17g})"
                )

            norm0 = float(np.linalg.norm(residual))
            for attempt in range(cfg.max_backtracks + 1):
                trial = phi + lam * delta
                _, trial_residual = self.step_residual(trial, phi_n, w_next, potential)
                if np.linalg.norm(trial_residual) <= (1.0 - LINE_SEARCH_C * lam) * norm0:
                    break
                if attempt == cfg.max_backtracks:
                    if dnorm <= np.sqrt(cfg.step_tol) and lam == 1.0:
                        # residual sits on its roundoff floor
                        logger.debug("Newton stagnated at |F|=%.3e, |delta|=%.3e; accepting", fnorm, dnorm)
                        return trial, iteration, backtracks
                    raise NewtonDiverged(
                        f"line search failed after {cfg.max_backtracks} backtracks (|F|={fnorm:.3e})"
                    )
                lam *= cfg.backtrack_factor
                backtracks += 1
            phi, residual = trial, trial_residual

        raise NewtonDiverged(f"Newton did not converge in {cfg.max_iter} iterations")

    def step_state(self, phi_n: np.ndarray, w_next: np.ndarray) -> StepResult:
        """Advance (phi, mu) by one step given phi_n and w_{n+1}."""
        if not (np.min(phi_n) > -1.0 and np.max(phi_n) < 1.0):
            raise SeparationBreach("phi_n must lie strictly inside (-1, 1)")

        fallback = False
        try:
            phi, iterations, backtracks = self._newton(phi_n, w_next, self.potential, phi_n)
        except (NewtonDiverged, SeparationBreach, SingularSystemError) as exc:
            eps = self.config.fallback_eps
            if eps is None:
                raise
            logger.warning("exact Newton failed (%s); retrying with Yosida regularization eps=%g", exc, eps)
            fallback = True
            regularized = self.potential.with_eps(eps)
            phi_reg, it_reg, bt_reg = self._newton(phi_n, w_next, regularized, phi_n)
            if not np.max(np.abs(phi_reg)) < 1.0 - self.config.boundary_guard:
                raise SeparationBreach("regularized step left the admissible interval") from exc
            phi, iterations, backtracks = self._newton(phi_n, w_next, self.potential, phi_reg)
            iterations += it_reg
            backtracks += bt_reg

        drift = float(mean_value(phi, self.grid)) - float(mean_value(phi_n, self.grid))
        if abs(drift) > self.config.mass_tol:
            raise MassConservationError(f"mean of phi drifted by {drift:.3e} in one step")
        # remove linear-solve roundoff so drift cannot accumulate over many steps
        phi = phi - drift

        mu = self.chemical_potential(phi, phi_n, w_next)
        return StepResult(phi=phi, mu=mu, iterations=iterations, backtracks=backtracks, fallback=fallback)

    # =========================================================================
    # Full trajectory
    # =========================================================================

    def solve(self, u: np.ndarray, check_bounds: bool = True) -> StateTrajectory:
        """Integrate from (phi0, w0) under the piecewise-constant control u."""
        problem = self.problem
        u = problem.check_control(u)
        if check_bounds and not problem.is_admissible(u):
            logger.warning(
                "control outside the box [%g, %g] (range [%g, %g])",
                problem.bounds.u_lb, problem.bounds.u_ub, float(np.min(u)), float(np.max(u)),
            )

        n_steps, n_cells = problem.control_shape
        phi = np.empty((n_steps + 1, n_cells))
        mu = np.empty_like(phi)
        w = np.empty_like(phi)
        iterations = np.zeros(n_steps, dtype=np.int64)

        phi[0] = problem.initial.phi0
        w[0] = problem.initial.w0
        # level 0 carries no time derivative
        mu[0] = -self.laplacian.matvec(phi[0]) + self.potential.d1(phi[0]) - w[0]

        for n in range(n_steps):
            w[n + 1] = self.decay * w[n] + (1.0 - self.decay) * u[n]
            try:
                step = self.step_state(phi[n], w[n + 1])
            except StateSolverError as exc:
                raise exc.at(n + 1)
            except SingularSystemError as exc:
                raise NewtonDiverged(f"singular Newton system: {exc}", n + 1) from exc
            phi[n + 1] = step.phi
            mu[n + 1] = step.mu
            iterations[n] = step.iterations
            self.telemetry.record_step(n + 1, step.iterations, step.backtracks, step.fallback)

        self.telemetry.record_solve()
        separation = separation_report(phi, mu, w, problem.potential)
        logger.debug(
            "forward solve: %d steps, %d Newton iterations, margin %.3e",
            n_steps, int(iterations.sum()), separation.margin,
        )
        return StateTrajectory(phi=phi, mu=mu, w=w, separation=separation, newton_iterations=iterations)


def step_state(phi_n: np.ndarray, w_next: np.ndarray, problem: ControlProblem) -> tuple[np.ndarray, np.ndarray]:
    """Functional form of StateSolver.step_state returning (phi_next, mu_next)."""
    result = StateSolver(problem).step_state(phi_n, w_next)
    return result.phi, result.mu


def solve_state(
    u: np.ndarray,
    problem: ControlProblem,
    laplacian: Optional[BandedOperator] = None,
    check_bounds: bool = True,
) -> StateTrajectory:
    """Forward solve for one control; see StateSolver.solve."""
    return StateSolver(problem, laplacian=laplacian).solve(u, check_bounds=check_bounds)
