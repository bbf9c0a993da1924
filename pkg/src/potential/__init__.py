"""Logarithmic potential, its derivatives and Moreau-Yosida regularization."""

from .logarithmic import (
    LogarithmicPotential,
    PotentialDomainError,
    PotentialParams,
    ResolventConvergenceError,
    f1_deriv,
    f1_deriv_inverse,
    f1_value,
    f2_deriv,
    f2_value,
    f_deriv,
    f_value,
    resolvent,
    yosida_deriv,
    yosida_second_deriv,
    yosida_value,
)

__all__ = [
    "LogarithmicPotential",
    "PotentialDomainError",
    "PotentialParams",
    "ResolventConvergenceError",
    "f1_deriv",
    "f1_deriv_inverse",
    "f1_value",
    "f2_deriv",
    "f2_value",
    "f_deriv",
    "f_value",
    "resolvent",
    "yosida_deriv",
    "yosida_second_deriv",
    "yosida_value",
]
