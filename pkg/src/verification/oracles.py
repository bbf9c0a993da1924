"""
Independent oracles.

Finite differences of the smooth reduced cost use only the forward solver
and the cost functional; no linearized or adjoint code is involved. Step
sizes are scanned over a candidate list and the value on the plateau
(smallest Richardson-style difference between neighbours) is returned
together with its error estimate.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from ..core import BandedOperator
from ..schemas import ControlProblem, OracleConfig
from ..state import StateSolver, StateTrajectory

TAYLOR_FLOOR = 1e3 * float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class FDEstimate:
    value: float
    step: float
    error_estimate: float
    scan: tuple[dict, ...] = ()


class SmoothObjective:
    """u -> J_smooth(u) with the box not enforced."""

    def __init__(self, problem: ControlProblem, laplacian: Optional[BandedOperator] = None) -> None:
        self.problem = problem
        self.stepper = StateSolver(problem, laplacian=laplacian)

    def state(self, u: np.ndarray) -> StateTrajectory:
        return self.stepper.solve(u, check_bounds=False)

    def __call__(self, u: np.ndarray) -> float:
        return cost_oracle(self.state(u), u, self.problem).j_smooth


@dataclass(frozen=True)
class OracleCost:
    j_smooth: float
    g: float


def cost_oracle(state: StateTrajectory, u: np.ndarray, problem: ControlProblem) -> OracleCost:
    """Cost by compensated summation in reverse accumulation order."""
    weights = problem.weights
    targets = problem.targets
    cell = problem.grid.h
    dt = problem.dt
    tracking = math.fsum(((state.phi[1:] - targets.phi_Q[1:]) ** 2).ravel()[::-1]) * cell * dt
    terminal = math.fsum(((state.phi[-1] - targets.phi_Omega) ** 2)[::-1]) * cell
    control = math.fsum((np.asarray(u) ** 2).ravel()[::-1]) * cell * dt
    g = math.fsum(np.abs(u).ravel()[::-1]) * cell * dt
    return OracleCost(
        j_smooth=0.5 * weights.b1 * tracking + 0.5 * weights.b2 * terminal + 0.5 * weights.b3 * control,
        g=g,
    )


def _select(steps: Sequence[float], values: Sequence[float], richardson: bool) -> FDEstimate:
    """Pick the neighbouring pair with the smallest disagreement."""
    errors = [abs(values[i] - values[i + 1]) for i in range(len(values) - 1)]
    best = int(np.argmin(errors))
    value = values[best + 1]
    if richardson:
        ratio_sq = (steps[best] / steps[best + 1]) ** 2
        value = (ratio_sq * values[best + 1] - values[best]) / (ratio_sq - 1.0)
    scan = tuple(
        {"step": s, "value": v, "error": errors[i] if i < len(errors) else None}
        for i, (s, v) in enumerate(zip(steps, values))
    )
    return FDEstimate(value=float(value), step=float(steps[best + 1]), error_estimate=float(errors[best]), scan=scan)


def _scaled_steps(h_dir: np.ndarray, candidates: Sequence[float]) -> list[float]:
    scale = 1.0 / float(np.max(np.abs(h_dir)))
    return [s * scale for s in candidates]


def fd_gradient(
    u: np.ndarray,
    h_dir: np.ndarray,
    problem: ControlProblem,
    cfg: Optional[OracleConfig] = None,
    objective: Optional[Callable[[np.ndarray], float]] = None,
) -> FDEstimate:
    """Central difference (J(u + s h) - J(u - s h)) / 2s at the tuned step."""
    cfg = cfg or OracleConfig()
    if not np.any(h_dir):
        return FDEstimate(value=0.0, step=0.0, error_estimate=0.0)
    objective = objective or SmoothObjective(problem)
    steps = _scaled_steps(h_dir, cfg.fd_steps)
    values = [(objective(u + s * h_dir) - objective(u - s * h_dir)) / (2.0 * s) for s in steps]
    return _select(steps, values, cfg.richardson)


def fd_second_difference(
    u: np.ndarray,
    h_dir: np.ndarray,
    problem: ControlProblem,
    cfg: Optional[OracleConfig] = None,
    objective: Optional[Callable[[np.ndarray], float]] = None,
) -> FDEstimate:
    """(J(u + s h) - 2 J(u) + J(u - s h)) / s^2 at the tuned step."""
    cfg = cfg or OracleConfig()
    if not np.any(h_dir):
        return FDEstimate(value=0.0, step=0.0, error_estimate=0.0)
    objective = objective or SmoothObjective(problem)
    center = objective(u)
    steps = _scaled_steps(h_dir, cfg.second_difference_steps)
    values = [(objective(u + s * h_dir) - 2.0 * center + objective(u - s * h_dir)) / s**2 for s in steps]
    return _select(steps, values, cfg.richardson)


def observed_order(steps: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(step)."""
    errors = np.maximum(np.asarray(errors, dtype=np.float64), np.finfo(np.float64).tiny)
    slope, _ = np.polyfit(np.log(np.asarray(steps)), np.log(errors), 1)
    return float(slope)


def taylor_order(steps: Sequence[float], remainders: Sequence[float], increments: Sequence[float]) -> float:
    """
    Observed order of Taylor remainders, ignoring steps on the roundoff floor.

    A step is kept when its remainder exceeds TAYLOR_FLOOR times the size of
    the increment it was taken from. Fewer than two kept steps give nan.
    """
    kept = [(s, r) for s, r, d in zip(steps, remainders, increments) if r > TAYLOR_FLOOR * d]
    if len(kept) < 2:
        return float("nan")
    kept_steps, kept_remainders = zip(*kept)
    return observed_order(kept_steps, kept_remainders)


def smooth_direction(
    problem: ControlProblem,
    rng: np.random.Generator,
    spatial_modes: int = 3,
    temporal_modes: int = 3,
) -> np.ndarray:
    """
    Random low-mode control sum_jk a_jk cos(j pi t / T) cos(k pi x / L), k >= 1.

    Coefficients are standard normal; the result is scaled to max |h| = 1.
    Spatially constant modes are omitted.
    """
    x = problem.grid.centers / problem.grid.length
    t = np.arange(problem.n_steps) / problem.n_steps
    time_basis = np.cos(np.pi * np.outer(np.arange(temporal_modes), t))
    space_basis = np.cos(np.pi * np.outer(np.arange(1, spatial_modes + 1), x))
    h = time_basis.T @ rng.standard_normal((temporal_modes, spatial_modes)) @ space_basis
    return h / float(np.max(np.abs(h)))


def bisection_root(fun: Callable[[float], float], lo: float, hi: float, tol: float = 1e-15, max_iter: int = 400) -> float:
    """Root of an increasing scalar function on [lo, hi] by plain bisection."""
    f_lo = fun(lo)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol:
            break
        f_mid = fun(mid)
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def grid_minimize(
    fun: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    points: int = 2001,
    refinements: int = 12,
) -> tuple[float, float]:
    """Brute-force scalar minimizer: dense grid, then repeated local refinement."""
    for _ in range(refinements + 1):
        xs = np.linspace(lo, hi, points)
        values = fun(xs)
        best = int(np.argmin(values))
        width = (hi - lo) / (points - 1)
        lo, hi = max(lo, xs[best] - 2 * width), min(hi, xs[best] + 2 * width)
    return float(xs[best]), float(values[best])
