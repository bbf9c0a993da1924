"""Cost, gradient, prox map, sparsity analysis and second-order form."""

from .cost import CostValue, ShapeMismatchError, evaluate_cost, l1_norm, reduced_gradient
from .hessian import hessian_quadratic_form, hessian_tracking_terms
from .prox import prox_point, soft_threshold, stationarity_alpha, stationarity_residual, subgradient_lambda
from .sparsity import (
    DEFAULT_TOL_U,
    KAPPA_ZERO,
    ConeMask,
    SparsityReport,
    critical_cone_mask,
    default_delta,
    project_to_critical_cone,
    sparsity_report,
    variational_inequality_gap,
)

__all__ = [
    "DEFAULT_TOL_U",
    "KAPPA_ZERO",
    "ConeMask",
    "CostValue",
    "ShapeMismatchError",
    "SparsityReport",
    "critical_cone_mask",
    "default_delta",
    "evaluate_cost",
    "hessian_quadratic_form",
    "hessian_tracking_terms",
    "l1_norm",
    "project_to_critical_cone",
    "prox_point",
    "reduced_gradient",
    "soft_threshold",
    "sparsity_report",
    "stationarity_alpha",
    "stationarity_residual",
    "subgradient_lambda",
    "variational_inequality_gap",
]
