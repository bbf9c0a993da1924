"""
Discretized problem data.

Frozen dataclasses holding the numpy arrays the solvers work with. Built
from a validated ProblemSpec by ControlProblem.from_spec.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING

import numpy as np

from ..core import FieldArray, Grid, mean_value
from ..potential import PotentialParams
from .problem import BoxBounds, CostWeights, NewtonConfig

if TYPE_CHECKING:
    from .problem import ProblemSpec

logger = logging.getLogger("vch_control.schemas")


@dataclass(frozen=True)
class PhysParams:
    """tau, gamma (per cell), horizon and time step."""

    tau: float
    gamma: FieldArray
    gamma0: float
    horizon: float
    n_steps: int

    def __post_init__(self) -> None:
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.gamma0 <= 0 or float(np.min(self.gamma)) < self.gamma0:
            raise ValueError("gamma must satisfy min(gamma) >= gamma0 > 0")
        if self.horizon <= 0 or self.n_steps < 1:
            raise ValueError("horizon and n_steps must be positive")

    @property
    def dt(self) -> float:
        return self.horizon / self.n_steps

    @property
    def decay(self) -> FieldArray:
        """exp(-dt/gamma): one-step factor of the exact w update."""
        return np.exp(-self.dt / self.gamma)


@dataclass(frozen=True)
class InitialData:
    phi0: FieldArray
    w0: FieldArray

    def __post_init__(self) -> None:
        if not (np.min(self.phi0) > -1.0 and np.max(self.phi0) < 1.0):
            raise ValueError("phi0 must lie strictly inside (-1, 1)")

    def mass(self, grid: Grid) -> float:
        return float(mean_value(self.phi0, grid))


@dataclass(frozen=True)
class Targets:
    """phi_Q on time levels 0..N (level 0 unused by the cost) and phi_Omega."""

    phi_Q: FieldArray
    phi_Omega: FieldArray

    def check(self, grid: Grid, n_steps: int) -> None:
        if self.phi_Q.shape != (n_steps + 1, grid.n_cells):
            raise ValueError(f"phi_Q must have shape {(n_steps + 1, grid.n_cells)}, got {self.phi_Q.shape}")
        if self.phi_Omega.shape != (grid.n_cells,):
            raise ValueError(f"phi_Omega must have shape {(grid.n_cells,)}, got {self.phi_Omega.shape}")


@dataclass(frozen=True)
class ControlProblem:
    """Numeric instance: everything a solver needs, as arrays."""

    grid: Grid
    phys: PhysParams
    potential: PotentialParams
    initial: InitialData
    targets: Targets
    weights: CostWeights
    bounds: BoxBounds
    solver: NewtonConfig = field(default_factory=NewtonConfig)

    def __post_init__(self) -> None:
        self.targets.check(self.grid, self.phys.n_steps)

    @classmethod
    def from_spec(cls, spec: "ProblemSpec") -> "ControlProblem":
        grid = spec.grid()
        n_steps = spec.time.n_steps
        phi_q = spec.targets.phi_Q.evaluate(grid)
        phi_omega_profile = spec.targets.phi_Omega or spec.targets.phi_Q
        return cls(
            grid=grid,
            phys=PhysParams(
                tau=spec.physics.tau,
                gamma=spec.physics.gamma.evaluate(grid),
                gamma0=spec.physics.gamma0,
                horizon=spec.time.horizon,
                n_steps=n_steps,
            ),
            potential=spec.potential,
            initial=InitialData(
                phi0=spec.initial.phi0.evaluate(grid),
                w0=spec.initial.w0.evaluate(grid),
            ),
            targets=Targets(
                phi_Q=np.tile(phi_q, (n_steps + 1, 1)),
                phi_Omega=phi_omega_profile.evaluate(grid),
            ),
            weights=spec.weights,
            bounds=spec.bounds,
            solver=spec.solver,
        )

    @property
    def n_steps(self) -> int:
        return self.phys.n_steps

    @property
    def dt(self) -> float:
        return self.phys.dt

    @property
    def control_shape(self) -> tuple[int, int]:
        return (self.phys.n_steps, self.grid.n_cells)

    @property
    def measure(self) -> float:
        """|Q| = L * T."""
        return self.grid.length * self.phys.horizon

    def zero_control(self) -> np.ndarray:
        return np.zeros(self.control_shape)

    def check_control(self, u: np.ndarray, name: str = "control") -> np.ndarray:
        arr = np.asarray(u, dtype=np.float64)
        if arr.shape != self.control_shape:
            raise ValueError(f"{name} must have shape {self.control_shape}, got {arr.shape}")
        return arr

    def is_admissible(self, u: np.ndarray) -> bool:
        return bool(np.all(u >= self.bounds.u_lb) and np.all(u <= self.bounds.u_ub))

    def project_control(self, u: np.ndarray) -> np.ndarray:
        return np.clip(self.check_control(u), self.bounds.u_lb, self.bounds.u_ub)

    def with_weights(self, **updates: float) -> "ControlProblem":
        return replace(self, weights=self.weights.model_copy(update=updates))

    def with_targets(self, targets: Targets) -> "ControlProblem":
        return replace(self, targets=targets)
