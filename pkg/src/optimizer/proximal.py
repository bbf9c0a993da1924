"""
Proximal gradient solver for the reduced problem

    min_u  J_smooth(u) + kappa ||u||_L1   over  u_lb <= u <= u_ub.

Each iteration takes u+ = Prox_alpha(u - alpha (r + b3 u)) and accepts it
when J_total(u+) <= J_total(u) - (sigma/alpha) ||u+ - u||^2_Q; otherwise
alpha is reduced. Fixed points of the update are exactly the controls
satisfying the pointwise projection formula.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from ..adjoint import AdjointSolver, AdjointTrajectory
from ..core import BandedOperator, spacetime_norm
from ..objective import (
    KAPPA_ZERO,
    CostValue,
    SparsityReport,
    default_delta,
    evaluate_cost,
    prox_point,
    reduced_gradient,
    sparsity_report,
    stationarity_residual,
)
from ..schemas import ControlProblem, OptimizerConfig
from ..state import StateSolver, StateSolverError, StateTrajectory

logger = logging.getLogger("vch_control.optimizer")

# Relative slack on the Armijo test for cost evaluations at roundoff level.
ROUNDOFF_SLACK = 10 * np.finfo(np.float64).eps


class OptimizerError(RuntimeError):
    """Raised when the step length underflows because forward solves keep failing."""


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    j_total: float
    j_smooth: float
    g: float
    stationarity: float
    alpha: float
    backtracks: int
    failed_solves: int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class OptimizerReport:
    """Outcome of one proximal-gradient run."""

    control: np.ndarray
    state: StateTrajectory
    adjoint: AdjointTrajectory
    cost: CostValue
    sparsity: SparsityReport
    stationarity: float
    converged: bool
    message: str
    history: list[IterationRecord] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return max(len(self.history) - 1, 0)

    def is_monotone(self, rtol: float = 1e-12) -> bool:
        """True when accepted iterates never increase J_total (up to rtol)."""
        values = [record.j_total for record in self.history]
        return all(b <= a + rtol * max(1.0, abs(a)) for a, b in zip(values, values[1:]))

    def summary(self) -> dict:
        return {
            "converged": self.converged,
            "iterations": self.iterations,
            "message": self.message,
            "stationarity": self.stationarity,
            "j_total": self.cost.j_total,
            "j_smooth": self.cost.j_smooth,
            "g": self.cost.g,
            **{f"sparsity_{k}": v for k, v in self.sparsity.to_dict().items()},
        }


class ProximalGradientSolver:
    """Runs the proximal gradient loop for one ControlProblem."""

    def __init__(
        self,
        problem: ControlProblem,
        config: Optional[OptimizerConfig] = None,
        laplacian: Optional[BandedOperator] = None,
    ) -> None:
        self.problem = problem
        self.config = config or OptimizerConfig()
        self.stepper = StateSolver(problem, laplacian=laplacian)

    @property
    def alpha0(self) -> float:
        return self.config.alpha0 if self.config.alpha0 is not None else 1.0 / self.problem.weights.b3

    def evaluate(self, u: np.ndarray) -> tuple[StateTrajectory, CostValue]:
        problem = self.problem
        state = self.stepper.solve(u, check_bounds=False)
        return state, evaluate_cost(state, u, problem.targets, problem.weights, problem)

    def adjoint(self, state: StateTrajectory) -> AdjointTrajectory:
        return AdjointSolver(self.problem, state, stepper=self.stepper).solve()

    def initial_control(self, u_init: Optional[np.ndarray]) -> np.ndarray:
        problem = self.problem
        u = np.full(problem.control_shape, self.config.u_init) if u_init is None else problem.check_control(u_init)
        if not problem.is_admissible(u):
            logger.warning("initial control outside the box; projecting")
            u = problem.project_control(u)
        return np.array(u, dtype=np.float64)

    def minimize(self, u_init: Optional[np.ndarray] = None) -> OptimizerReport:
        problem = self.problem
        cfg = self.config
        weights = problem.weights
        lb, ub = problem.bounds.u_lb, problem.bounds.u_ub
        sigma = cfg.sufficient_decrease

        u = self.initial_control(u_init)
        state, cost = self.evaluate(u)
        adjoint = self.adjoint(state)
        alpha = self.alpha0
        history: list[IterationRecord] = []
        backtracks = failed = 0
        converged = False
        message = "iteration budget exhausted"

        for iteration in range(cfg.max_iters + 1):
            r = adjoint.gradient_part
            stationarity = stationarity_residual(u, r, weights, lb, ub)
            history.append(
                IterationRecord(
                    iteration=iteration,
                    j_total=cost.j_total,
                    j_smooth=cost.j_smooth,
                    g=cost.g,
                    stationarity=stationarity,
                    alpha=alpha,
                    backtracks=backtracks,
                    failed_solves=failed,
                )
            )
            logger.debug("iter %d: J=%.12e stat=%.3e alpha=%.3e", iteration, cost.j_total, stationarity, alpha)

            if stationarity <= cfg.stat_tol:
                converged = True
                message = "stationarity tolerance reached"
                break
            if iteration == cfg.max_iters:
                break

            gradient = reduced_gradient(u, adjoint, weights)
            backtracks = failed = 0
            accepted = None
            while accepted is None:
                trial = prox_point(gradient, u, alpha, weights, lb, ub)
                step_sq = spacetime_norm(trial - u, problem.grid, problem.dt) ** 2
                try:
                    trial_state, trial_cost = self.evaluate(trial)
                except StateSolverError as exc:
                    logger.warning("forward solve failed at trial step alpha=%.3e: %s", alpha, exc)
                    failed += 1
                    trial_cost = None

                if trial_cost is not None:
                    slack = ROUNDOFF_SLACK * max(1.0, abs(cost.j_total))
                    if trial_cost.j_total <= cost.j_total - (sigma / alpha) * step_sq + slack:
                        accepted = (trial, trial_state, trial_cost)
                        break

                alpha *= cfg.backtrack_factor
                backtracks += 1
                if alpha < cfg.min_alpha:
                    if trial_cost is None:
                        raise OptimizerError(f"step length underflow after repeated forward failures ({failed})")
                    break

            if accepted is None:
                message = "line search stalled"
                logger.warning("line search stalled at iteration %d (stationarity %.3e)", iteration, stationarity)
                break

            u, state, cost = accepted
            adjoint = self.adjoint(state)
            if backtracks == 0:
                alpha = min(alpha * cfg.alpha_growth, self.alpha0)

        r = adjoint.gradient_part
        delta = default_delta(cfg.stat_tol, weights) if weights.kappa > KAPPA_ZERO else 0.0
        report = sparsity_report(u, r, weights, tol_u=cfg.tol_u, delta=delta, bounds=problem.bounds)
        report = report.with_cost(cost.j_total, cost.g)

        logger.info(
            "optimizer %s after %d iterations: J_total=%.10e, stationarity=%.3e, zero_fraction=%.3f",
            "converged" if converged else "stopped", len(history) - 1, cost.j_total,
            history[-1].stationarity, report.zero_fraction,
        )
        return OptimizerReport(
            control=u,
            state=state,
            adjoint=adjoint,
            cost=cost,
            sparsity=report,
            stationarity=history[-1].stationarity,
            converged=converged,
            message=message,
            history=history,
        )


def minimize(
    problem: ControlProblem,
    cfg: Optional[OptimizerConfig] = None,
    u_init: Optional[np.ndarray] = None,
) -> OptimizerReport:
    """Run proximal gradient from u_init (or the configured constant)."""
    return ProximalGradientSolver(problem, cfg).minimize(u_init)
