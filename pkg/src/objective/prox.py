"""
Pointwise proximal map of kappa |v| + indicator([lb, ub]) and the L1
multiplier.

For scalar convex terms the prox of the sum is the box projection of the
soft-thresholded point, which is exact also when 0 lies outside the box.
"""

import numpy as np
from numpy.typing import ArrayLike

from ..schemas import CostWeights


def soft_threshold(x: ArrayLike, threshold: float) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.maximum(np.abs(x) - threshold, 0.0)


def prox_point(
    g_r: ArrayLike,
    u_old: ArrayLike,
    alpha: float,
    weights: CostWeights,
    lb: ArrayLike,
    ub: ArrayLike,
):
    """
    u+ = clip_[lb, ub](soft_{alpha kappa}(u_old - alpha g_r)).

    g_r is the smooth gradient r + b3 u_old. Works pointwise on arrays;
    returns a float for scalar input.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if np.any(np.asarray(lb) > np.asarray(ub)):
        raise ValueError("lower bound exceeds upper bound")
    step = np.asarray(u_old, dtype=np.float64) - alpha * np.asarray(g_r, dtype=np.float64)
    out = np.clip(soft_threshold(step, alpha * weights.kappa), lb, ub)
    return float(out) if np.ndim(out) == 0 else out


def stationarity_alpha(weights: CostWeights) -> float:
    """Fixed prox step used to measure stationarity (1/b3 capped at 1)."""
    return min(1.0, 1.0 / weights.b3)


def stationarity_residual(
    u: np.ndarray,
    r: np.ndarray,
    weights: CostWeights,
    lb: float,
    ub: float,
    alpha: float | None = None,
) -> float:
    """||u - Prox_alpha(u - alpha (r + b3 u))||_inf / alpha."""
    alpha = alpha if alpha is not None else stationarity_alpha(weights)
    gradient = np.asarray(r) + weights.b3 * np.asarray(u)
    fixed = prox_point(gradient, u, alpha, weights, lb, ub)
    return float(np.max(np.abs(np.asarray(u) - fixed))) / alpha


def subgradient_lambda(u: ArrayLike, r: ArrayLike, weights: CostWeights, tol_u: float = 1e-10) -> np.ndarray:
    """
    Multiplier lambda in the subdifferential of |u|.

    sign(u) where |u| > tol_u, otherwise -(r + b3 u)/kappa clipped to [-1, 1].
    """
    if weights.kappa <= 0.0:
        raise ValueError("lambda is undefined for kappa = 0")
    u = np.asarray(u, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    on_zero = np.clip(-(r + weights.b3 * u) / weights.kappa, -1.0, 1.0)
    return np.where(u > tol_u, 1.0, np.where(u < -tol_u, -1.0, on_zero))
