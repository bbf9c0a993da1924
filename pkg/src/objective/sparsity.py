"""
Sparsity characterization, critical cone and first-order checks.

The equivalence u*(x,t) = 0 <=> |r*(x,t)| <= kappa holds exactly only at
exact optima; reports count its violations outside a band of width delta.
"""

import logging
from dataclasses import asdict, dataclass, replace
from typing import Optional

import numpy as np

from ..schemas import BoxBounds, ControlProblem, CostWeights
from .prox import subgradient_lambda

logger = logging.getLogger("vch_control.objective")

DEFAULT_TOL_U = 1e-10
# kappa below this is treated as "no L1 term"
KAPPA_ZERO = 1e-14


@dataclass(frozen=True)
class SparsityReport:
    kappa: float
    delta: float
    tol_u: float
    zero_fraction: float
    violations_a: int
    violations_b: int
    skipped: bool = False
    j_total: Optional[float] = None
    norm_u_l1: Optional[float] = None

    def with_cost(self, j_total: float, norm_u_l1: float) -> "SparsityReport":
        return replace(self, j_total=j_total, norm_u_l1=norm_u_l1)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_row(self) -> dict:
        """One CSV row: (kappa, zero_fraction, violations_a, violations_b, J_total, norm_u_L1)."""
        return {
            "kappa": self.kappa,
            "zero_fraction": self.zero_fraction,
            "violations_a": "skipped" if self.skipped else self.violations_a,
            "violations_b": "skipped" if self.skipped else self.violations_b,
            "J_total": self.j_total,
            "norm_u_L1": self.norm_u_l1,
        }


def default_delta(stat_tol: float, weights: CostWeights) -> float:
    """Tolerance band around kappa: 10 * stat_tol / b3."""
    return 10.0 * stat_tol / weights.b3


def sparsity_report(
    u: np.ndarray,
    r: np.ndarray,
    weights: CostWeights,
    tol_u: float = DEFAULT_TOL_U,
    delta: float = 0.0,
    bounds: Optional[BoxBounds] = None,
) -> SparsityReport:
    """Count violations of both directions of the sparsity equivalence."""
    u = np.asarray(u)
    r = np.asarray(r)
    if bounds is not None and not bounds.brackets_zero:
        logger.warning("sparsity characterization assumes u_lb < 0 < u_ub, got [%g, %g]", bounds.u_lb, bounds.u_ub)

    kappa = weights.kappa
    if kappa <= KAPPA_ZERO:
        return SparsityReport(
            kappa=kappa,
            delta=delta,
            tol_u=tol_u,
            zero_fraction=float(np.mean(u == 0.0)),
            violations_a=0,
            violations_b=0,
            skipped=True,
        )

    is_zero = np.abs(u) <= tol_u
    violations_a = int(np.count_nonzero(~is_zero & (np.abs(r) <= kappa - delta)))
    violations_b = int(np.count_nonzero(is_zero & (np.abs(r) > kappa + delta)))
    return SparsityReport(
        kappa=kappa,
        delta=delta,
        tol_u=tol_u,
        zero_fraction=float(np.mean(is_zero)),
        violations_a=violations_a,
        violations_b=violations_b,
    )


@dataclass(frozen=True)
class ConeMask:
    """Pointwise classification of the critical-cone surrogate."""

    free: np.ndarray
    nonnegative: np.ndarray
    nonpositive: np.ndarray
    zero: np.ndarray

    def size(self) -> dict:
        return {
            "free": int(np.count_nonzero(self.free)),
            "nonnegative": int(np.count_nonzero(self.nonnegative)),
            "nonpositive": int(np.count_nonzero(self.nonpositive)),
            "zero": int(np.count_nonzero(self.zero)),
        }


def critical_cone_mask(
    u: np.ndarray,
    r: np.ndarray,
    weights: CostWeights,
    bounds: BoxBounds,
    tol_u: float = DEFAULT_TOL_U,
    delta: float = 0.0,
) -> ConeMask:
    """
    Pointwise sign conditions of the critical cone with activity tolerances.

    v = 0 where ||r + b3 u| - kappa| > delta; otherwise v >= 0 at the lower
    bound or where u = 0 and r = -kappa, v <= 0 at the upper bound or where
    u = 0 and r = kappa, and v is free elsewhere.
    """
    u = np.asarray(u)
    r = np.asarray(r)
    kappa = weights.kappa
    strict = np.abs(np.abs(r + weights.b3 * u) - kappa) > delta
    at_zero = np.abs(u) <= tol_u
    lower = (np.abs(u - bounds.u_lb) <= tol_u) | (at_zero & (np.abs(r + kappa) <= delta) & (kappa > 0))
    upper = (np.abs(u - bounds.u_ub) <= tol_u) | (at_zero & (np.abs(r - kappa) <= delta) & (kappa > 0))

    zero = strict | (lower & upper)
    nonnegative = ~zero & lower
    nonpositive = ~zero & upper & ~lower
    free = ~(zero | nonnegative | nonpositive)
    return ConeMask(free=free, nonnegative=nonnegative, nonpositive=nonpositive, zero=zero)


def project_to_critical_cone(v: np.ndarray, mask: ConeMask) -> np.ndarray:
    out = np.where(mask.zero, 0.0, v)
    out = np.where(mask.nonnegative, np.maximum(out, 0.0), out)
    return np.where(mask.nonpositive, np.minimum(out, 0.0), out)


def variational_inequality_gap(
    u_star: np.ndarray,
    r: np.ndarray,
    problem: ControlProblem,
    samples: int = 16,
    seed: int = 0,
    tol_u: float = DEFAULT_TOL_U,
) -> float:
    """
    min over sampled admissible u of the first-order pairing
    dt h sum (r + kappa lambda + b3 u*)(u - u*); nonnegative at a stationary point.
    """
    weights = problem.weights
    lam = subgradient_lambda(u_star, r, weights, tol_u) if weights.kappa > KAPPA_ZERO else 0.0
    g = r + weights.kappa * lam + weights.b3 * u_star
    rng = np.random.default_rng(seed)
    scale = problem.grid.h * problem.dt
    gaps = []
    for _ in range(samples):
        u = rng.uniform(problem.bounds.u_lb, problem.bounds.u_ub, size=problem.control_shape)
        gaps.append(float(scale * np.sum(g * (u - u_star))))
    return min(gaps)
