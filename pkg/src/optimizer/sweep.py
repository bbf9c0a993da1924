"""
kappa sweep with warm starts.

kappa values are processed in ascending order, each run starting from the
previous solution. The annihilation threshold max|r| at u = 0 can be used
to express the sweep in relative units.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..adjoint import AdjointSolver
from ..schemas import ControlProblem, OptimizerConfig
from ..state import StateSolver
from .proximal import OptimizerReport, ProximalGradientSolver

logger = logging.getLogger("vch_control.optimizer")


@dataclass(frozen=True)
class SweepRow:
    kappa: float
    zero_fraction: float
    zero_fraction_monotone: bool
    violations_a: object
    violations_b: object
    j_total: float
    norm_u_l1: float
    max_abs_r: float
    all_zero: bool
    converged: bool
    iterations: int
    stationarity: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SweepResult:
    rows: list[SweepRow]
    reports: list[OptimizerReport] = field(repr=False)
    threshold: Optional[float] = None

    @property
    def smallest_zero_kappa(self) -> Optional[float]:
        """Smallest swept kappa whose optimal control vanishes identically."""
        return next((row.kappa for row in self.rows if row.all_zero), None)


def annihilation_threshold(problem: ControlProblem) -> float:
    """max |r| from the adjoint at u = 0; u = 0 is stationary for kappa above it."""
    stepper = StateSolver(problem)
    state = stepper.solve(problem.zero_control())
    adjoint = AdjointSolver(problem, state, stepper=stepper).solve()
    return float(np.max(np.abs(adjoint.gradient_part)))


def kappa_sweep(
    problem: ControlProblem,
    cfg: Optional[OptimizerConfig] = None,
    kappas: Sequence[float] = (),
    relative: bool = False,
) -> SweepResult:
    """One optimizer run per kappa (ascending), warm-started."""
    kappas = list(kappas)
    if not kappas:
        raise ValueError("kappas must not be empty")
    if any(b < a for a, b in zip(kappas, kappas[1:])):
        raise ValueError("kappas must be sorted ascending")

    cfg = cfg or OptimizerConfig()
    threshold = annihilation_threshold(problem) if relative else None
    values = [k * threshold for k in kappas] if threshold is not None else kappas

    rows: list[SweepRow] = []
    reports: list[OptimizerReport] = []
    u_start: Optional[np.ndarray] = None
    previous_zero_fraction = -1.0
    for kappa in values:
        solver = ProximalGradientSolver(problem.with_weights(kappa=kappa), cfg)
        report = solver.minimize(u_start)
        u_start = report.control
        sparsity = report.sparsity
        row = SweepRow(
            kappa=kappa,
            zero_fraction=sparsity.zero_fraction,
            zero_fraction_monotone=sparsity.zero_fraction >= previous_zero_fraction,
            violations_a="skipped" if sparsity.skipped else sparsity.violations_a,
            violations_b="skipped" if sparsity.skipped else sparsity.violations_b,
            j_total=report.cost.j_total,
            norm_u_l1=report.cost.g,
            max_abs_r=float(np.max(np.abs(report.adjoint.gradient_part))),
            all_zero=bool(np.all(np.abs(report.control) <= cfg.tol_u)),
            converged=report.converged,
            iterations=report.iterations,
            stationarity=report.stationarity,
        )
        previous_zero_fraction = sparsity.zero_fraction
        rows.append(row)
        reports.append(report)
        logger.info("kappa=%.6g: zero_fraction=%.4f, J_total=%.8e", kappa, row.zero_fraction, row.j_total)

    return SweepResult(rows=rows, reports=reports, threshold=threshold)
