"""
Problem Configuration Schemas

Pydantic models for everything that defines an optimal control instance:
geometry, time horizon, physics, potential, initial data, targets, cost
weights, box bounds and forward-solver tolerances. Admissibility rules are
enforced at validation time so an invalid configuration never reaches a
solver.
"""

from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core import Grid, build_grid
from ..potential import PotentialParams


class FieldProfile(BaseModel):
    """
    A spatial profile evaluated on the grid.

    - constant: mean everywhere
    - cosine:   mean + amplitude * cos(mode * pi * x / L)
    - values:   explicit per-cell list (length must match n_cells)
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["constant", "cosine", "values"] = Field(
        default="constant",
        description="Profile family",
    )
    mean: float = Field(default=0.0, description="Constant offset")
    amplitude: float = Field(default=0.0, description="Cosine amplitude")
    mode: int = Field(default=1, ge=0, description="Cosine mode number")
    values: Optional[list[float]] = Field(default=None, description="Explicit cell values")

    @model_validator(mode="after")
    def _validate_values(self) -> "FieldProfile":
        if self.kind == "values" and not self.values:
            raise ValueError("profile kind 'values' requires a non-empty values list")
        return self

    def evaluate(self, grid: Grid) -> np.ndarray:
        if self.kind == "constant":
            return np.full(grid.n_cells, self.mean)
        if self.kind == "cosine":
            return self.mean + self.amplitude * np.cos(self.mode * np.pi * grid.centers / grid.length)
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (grid.n_cells,):
            raise ValueError(f"profile has {values.size} values, grid has {grid.n_cells} cells")
        return values


class GeometrySpec(BaseModel):
    length: float = Field(default=1.0, gt=0.0, description="Domain length L, Omega = (0, L)")
    n_cells: int = Field(default=128, ge=4, description="Number of uniform cells")


class TimeSpec(BaseModel):
    horizon: float = Field(default=0.5, gt=0.0, description="Final time T")
    n_steps: int = Field(default=256, ge=1, description="Number of time steps")


class PhysicsSpec(BaseModel):
    tau: float = Field(default=0.1, gt=0.0, description="Viscosity coefficient")
    gamma: FieldProfile = Field(
        default=FieldProfile(kind="constant", mean=0.5),
        description="Relaxation coefficient of the w-equation",
    )
    gamma0: float = Field(default=0.1, gt=0.0, description="Required lower bound for gamma")


class InitialSpec(BaseModel):
    phi0: FieldProfile = Field(default=FieldProfile(kind="cosine", amplitude=0.2))
    w0: FieldProfile = Field(default=FieldProfile(kind="constant", mean=0.0))


class TargetSpec(BaseModel):
    phi_Q: FieldProfile = Field(
        default=FieldProfile(kind="cosine", amplitude=0.4),
        description="Tracking target, stationary in time",
    )
    phi_Omega: Optional[FieldProfile] = Field(
        default=None,
        description="Terminal target; defaults to phi_Q at the final time",
    )


class CostWeights(BaseModel):
    """Weights of the cost functional."""

    model_config = ConfigDict(frozen=True)

    b1: float = Field(default=1.0, ge=0.0, description="Space-time tracking weight")
    b2: float = Field(default=0.5, ge=0.0, description="Terminal tracking weight")
    b3: float = Field(default=1e-2, gt=0.0, description="Control cost weight")
    kappa: float = Field(default=0.0, ge=0.0, description="Sparsity (L1) weight")


class BoxBounds(BaseModel):
    """Constant pointwise bounds u_lb <= u <= u_ub."""

    model_config = ConfigDict(frozen=True)

    u_lb: float = Field(default=-5.0, description="Lower control bound")
    u_ub: float = Field(default=5.0, description="Upper control bound")

    @model_validator(mode="after")
    def _validate_order(self) -> "BoxBounds":
        if self.u_lb > self.u_ub:
            raise ValueError(f"u_lb must not exceed u_ub, got [{self.u_lb}, {self.u_ub}]")
        return self

    @property
    def brackets_zero(self) -> bool:
        return self.u_lb < 0.0 < self.u_ub


class NewtonConfig(BaseModel):
    """Tolerances of the per-step Newton solve."""

    model_config = ConfigDict(frozen=True)

    atol: float = Field(default=1e-10, gt=0.0, description="Sup-norm residual tolerance")
    step_tol: float = Field(default=1e-13, gt=0.0, description="Stop when the Newton correction is this small")
    max_iter: int = Field(default=50, ge=1)
    backtrack_factor: float = Field(default=0.5, gt=0.0, lt=1.0)
    max_backtracks: int = Field(default=30, ge=0)
    boundary_guard: float = Field(default=1e-9, gt=0.0, lt=1e-2, description="Iterates stay in [-1+g, 1-g]")
    fallback_eps: Optional[float] = Field(default=1e-3, gt=0.0, le=1.0, description="Yosida fallback; None disables")
    mass_tol: float = Field(default=1e-12, gt=0.0, description="Per-step mean drift tolerance")


class ProblemSpec(BaseModel):
    """Complete description of one sparse optimal control instance."""

    geometry: GeometrySpec = Field(default_factory=GeometrySpec)
    time: TimeSpec = Field(default_factory=TimeSpec)
    physics: PhysicsSpec = Field(default_factory=PhysicsSpec)
    potential: PotentialParams = Field(default_factory=PotentialParams)
    initial: InitialSpec = Field(default_factory=InitialSpec)
    targets: TargetSpec = Field(default_factory=TargetSpec)
    weights: CostWeights = Field(default_factory=CostWeights)
    bounds: BoxBounds = Field(default_factory=BoxBounds)
    solver: NewtonConfig = Field(default_factory=NewtonConfig)

    @model_validator(mode="after")
    def _validate_admissible(self) -> "ProblemSpec":
        """Check the conditions that need the grid: gamma >= gamma0, -1 < phi0 < 1."""
        grid = self.grid()
        gamma = self.physics.gamma.evaluate(grid)
        if float(np.min(gamma)) < self.physics.gamma0:
            raise ValueError(f"gamma must be >= gamma0={self.physics.gamma0}, min is {np.min(gamma):.6g}")
        phi0 = self.initial.phi0.evaluate(grid)
        if not (np.min(phi0) > -1.0 and np.max(phi0) < 1.0):
            raise ValueError("initial phase field must lie strictly inside (-1, 1)")
        self.initial.w0.evaluate(grid)
        self.targets.phi_Q.evaluate(grid)
        if self.targets.phi_Omega is not None:
            self.targets.phi_Omega.evaluate(grid)
        return self

    def grid(self) -> Grid:
        return build_grid(self.geometry.length, self.geometry.n_cells)

    def discretize(self):
        """Evaluate every profile and return the numeric ControlProblem."""
        from .discrete import ControlProblem

        return ControlProblem.from_spec(self)
