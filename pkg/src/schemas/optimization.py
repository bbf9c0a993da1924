"""
Optimization and Verification Configuration Schemas

Pydantic models for the proximal-gradient solver, the kappa sweep, the
second-order check and the finite-difference oracles / property suites.
"""

from typing import Optional

from pydantic import BaseModel, Field, field_validator


class OptimizerConfig(BaseModel):
    """Proximal gradient with Armijo backtracking."""

    alpha0: Optional[float] = Field(default=None, gt=0.0, description="Initial step; None means 1/b3")
    backtrack_factor: float = Field(default=0.5, gt=0.0, lt=1.0, description="Armijo step reduction")
    sufficient_decrease: float = Field(default=1e-4, gt=0.0, lt=1.0, description="Armijo constant sigma")
    alpha_growth: float = Field(default=2.0, ge=1.0, description="Step growth after an unreduced step")
    max_iters: int = Field(default=500, ge=0)
    stat_tol: float = Field(default=1e-8, gt=0.0, description="Stationarity tolerance")
    min_alpha: float = Field(default=1e-12, gt=0.0, description="Step underflow threshold")
    u_init: float = Field(default=0.0, description="Constant initial control (projected onto the box)")
    tol_u: float = Field(default=1e-10, gt=0.0, description="|u| below this counts as zero")


class SweepConfig(BaseModel):
    """kappa values for the sweep, ascending."""

    kappas: list[float] = Field(default_factory=lambda: [0.0, 0.25, 0.5, 1.1])
    relative_to_threshold: bool = Field(
        default=True,
        description="Interpret kappas as multiples of max|r| at u = 0",
    )

    @field_validator("kappas")
    @classmethod
    def _ascending(cls, value: list[float]) -> list[float]:
        if not value:
            raise ValueError("kappas must not be empty")
        if any(k < 0 for k in value):
            raise ValueError("kappas must be nonnegative")
        if any(b < a for a, b in zip(value, value[1:])):
            raise ValueError("kappas must be sorted ascending")
        return value


class SecondOrderConfig(BaseModel):
    """Sampled critical-cone curvature and quadratic growth samples."""

    n_dirs: int = Field(default=64, ge=1, description="Random directions projected onto the cone")
    fd_crosscheck: int = Field(default=3, ge=0, description="Directions compared against the FD oracle")
    growth_samples: int = Field(default=16, ge=0)
    growth_steps: list[float] = Field(default_factory=lambda: [1e-3, 1e-2])
    growth_atol: float = Field(default=1e-12, ge=0.0)
    n_workers: Optional[int] = Field(default=None, ge=1, description="None uses the process setting")


class OracleConfig(BaseModel):
    """Finite-difference oracles and property-suite parameters."""

    fd_steps: list[float] = Field(default_factory=lambda: [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7])
    second_difference_steps: list[float] = Field(default_factory=lambda: [1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4])
    richardson: bool = Field(default=True)
    seeds: list[int] = Field(default_factory=lambda: [0, 1, 2, 3, 4])

    taylor_steps: list[float] = Field(default_factory=lambda: [1e-1, 1e-2, 1e-3, 1e-4])
    bilinear_taylor_steps: list[float] = Field(default_factory=lambda: [2e-1, 1e-1, 5e-2, 2.5e-2])
    taylor_directions: int = Field(default=3, ge=1)
    random_controls: int = Field(default=8, ge=0)
    potential_samples: int = Field(default=10_000, ge=100)

    mass_tol: float = Field(default=1e-12, gt=0.0)
    margin_tol: float = Field(default=1e-3, gt=0.0)
    linear_order: float = Field(default=1.9)
    bilinear_order: float = Field(default=2.7)
    duality_tol: float = Field(default=1e-10, gt=0.0)
    gradient_tol: float = Field(default=1e-6, gt=0.0)
    hessian_tol: float = Field(default=1e-4, gt=0.0)
    symmetry_tol: float = Field(default=1e-12, gt=0.0)
    sparsity_kappas: list[float] = Field(
        default_factory=lambda: [0.25, 0.5, 1.1],
        description="Multiples of max|r| at u = 0 used by the sparsity suite",
    )

    @field_validator("fd_steps", "second_difference_steps", "taylor_steps", "bilinear_taylor_steps")
    @classmethod
    def _positive_descending(cls, value: list[float]) -> list[float]:
        if len(value) < 2:
            raise ValueError("need at least two steps")
        if any(s <= 0 for s in value):
            raise ValueError("steps must be positive")
        if any(b >= a for a, b in zip(value, value[1:])):
            raise ValueError("steps must be strictly descending")
        return value
