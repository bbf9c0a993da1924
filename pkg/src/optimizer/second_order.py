"""
Sampled second-order checks at an approximately stationary control.

Random directions are projected onto a tolerance-based surrogate of the
critical cone, normalized in L2(Q) and fed to the second-derivative form.
Quadratic growth is sampled with admissible perturbations u* + s v.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from ..adjoint import AdjointSolver
from ..config.settings import settings
from ..core import spacetime_norm
from ..objective import (
    critical_cone_mask,
    default_delta,
    evaluate_cost,
    hessian_quadratic_form,
    project_to_critical_cone,
)
from ..schemas import ControlProblem, OptimizerConfig, OracleConfig, SecondOrderConfig
from ..sensitivity import SensitivitySolver
from ..state import StateSolver

logger = logging.getLogger("vch_control.optimizer")


@dataclass(frozen=True)
class DirectionRecord:
    index: int
    free: int
    nonnegative: int
    nonpositive: int
    zeroed: int
    skipped: bool
    curvature: Optional[float] = None
    fd_curvature: Optional[float] = None
    fd_relative_error: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GrowthSample:
    index: int
    step: float
    displacement: float
    j_star: float
    j_perturbed: float
    passed: bool

    @property
    def increase(self) -> float:
        return self.j_perturbed - self.j_star

    def to_dict(self) -> dict:
        return {**asdict(self), "increase": self.increase}


@dataclass
class SecondOrderReport:
    min_curvature: Optional[float]
    seed: int
    directions: list[DirectionRecord] = field(default_factory=list)
    growth: list[GrowthSample] = field(default_factory=list)

    @property
    def skipped(self) -> int:
        return sum(1 for d in self.directions if d.skipped)

    @property
    def max_fd_error(self) -> Optional[float]:
        errors = [d.fd_relative_error for d in self.directions if d.fd_relative_error is not None]
        return max(errors) if errors else None

    @property
    def growth_passed(self) -> bool:
        return all(p.passed for p in self.growth)

    @property
    def growth_constant(self) -> Optional[float]:
        """min over samples of (J(u* + s v) - J(u*)) / ||s v||^2_Q."""
        ratios = [p.increase / p.displacement**2 for p in self.growth if p.displacement > 0]
        return min(ratios) if ratios else None


def quadratic_growth_samples(
    u_star: np.ndarray,
    problem: ControlProblem,
    n_samples: int = 16,
    steps: tuple[float, ...] = (1e-3, 1e-2),
    seed: int = 0,
    atol: float = 1e-12,
) -> list[GrowthSample]:
    """Compare J_total at clipped perturbations u* + s v against J_total(u*)."""
    stepper = StateSolver(problem)

    def j_total(u: np.ndarray) -> float:
        state = stepper.solve(u, check_bounds=False)
        return evaluate_cost(state, u, problem.targets, problem.weights, problem).j_total

    j_star = j_total(u_star)
    rng = np.random.default_rng(seed)
    samples = []
    for index in range(n_samples):
        v = rng.uniform(-1.0, 1.0, size=problem.control_shape)
        for step in steps:
            perturbed = problem.project_control(u_star + step * v)
            value = j_total(perturbed)
            samples.append(
                GrowthSample(
                    index=index,
                    step=step,
                    displacement=spacetime_norm(perturbed - u_star, problem.grid, problem.dt),
                    j_star=j_star,
                    j_perturbed=value,
                    passed=value >= j_star - atol,
                )
            )
    return samples


def second_order_check(
    u_star: np.ndarray,
    problem: ControlProblem,
    n_dirs: int = 64,
    seed: int = 0,
    cfg: Optional[SecondOrderConfig] = None,
    optimizer_cfg: Optional[OptimizerConfig] = None,
    oracle_cfg: Optional[OracleConfig] = None,
) -> SecondOrderReport:
    """Minimum sampled curvature over the critical-cone surrogate plus growth samples."""
    from ..verification.oracles import fd_second_difference

    cfg = cfg or SecondOrderConfig()
    optimizer_cfg = optimizer_cfg or OptimizerConfig()
    oracle_cfg = oracle_cfg or OracleConfig()
    weights = problem.weights

    stepper = StateSolver(problem)
    base = stepper.solve(u_star, check_bounds=False)
    adjoint = AdjointSolver(problem, base, stepper=stepper).solve()
    r = adjoint.gradient_part
    mask = critical_cone_mask(
        u_star, r, weights, problem.bounds,
        tol_u=optimizer_cfg.tol_u,
        delta=default_delta(optimizer_cfg.stat_tol, weights),
    )
    sizes = mask.size()
    sensitivity = SensitivitySolver(problem, base)

    rng = np.random.default_rng(seed)
    directions = []
    for _ in range(n_dirs):
        v = project_to_critical_cone(rng.standard_normal(problem.control_shape), mask)
        norm = spacetime_norm(v, problem.grid, problem.dt)
        directions.append(v / norm if norm > 0 else None)

    def curvature(v: Optional[np.ndarray]) -> Optional[float]:
        if v is None:
            return None
        return hessian_quadratic_form(u_star, v, v, base, adjoint, problem, sensitivity)

    workers = cfg.n_workers or settings.n_workers
    with ThreadPoolExecutor(max_workers=workers) as pool:
        curvatures = list(pool.map(curvature, directions))

    records = []
    checked = 0
    for index, (v, value) in enumerate(zip(directions, curvatures)):
        fd_value = fd_error = None
        if v is not None and checked < cfg.fd_crosscheck:
            fd_value = fd_second_difference(u_star, v, problem, oracle_cfg).value
            fd_error = abs(value - fd_value) / max(1.0, abs(value))
            checked += 1
        records.append(
            DirectionRecord(
                index=index,
                free=sizes["free"],
                nonnegative=sizes["nonnegative"],
                nonpositive=sizes["nonpositive"],
                zeroed=sizes["zero"],
                skipped=v is None,
                curvature=value,
                fd_curvature=fd_value,
                fd_relative_error=fd_error,
            )
        )

    values = [c for c in curvatures if c is not None]
    min_curvature = min(values) if values else None
    if min_curvature is None:
        logger.warning("critical-cone surrogate is empty; all %d directions skipped", n_dirs)

    growth = quadratic_growth_samples(
        u_star, problem, cfg.growth_samples, tuple(cfg.growth_steps), seed, cfg.growth_atol
    )
    report = SecondOrderReport(min_curvature=min_curvature, seed=seed, directions=records, growth=growth)
    logger.info(
        "second-order check: min curvature %s over %d directions (%d skipped), growth samples %s",
        f"{min_curvature:.6e}" if min_curvature is not None else "n/a",
        n_dirs, report.skipped, "passed" if report.growth_passed else "FAILED",
    )
    return report
