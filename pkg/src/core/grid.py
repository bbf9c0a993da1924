"""
Spatial grid, discrete fields and quadrature.

The domain is the interval (0, length) split into n_cells uniform cells;
field values live at cell centres x_i = (i + 1/2) h. Space-time arrays are
stacked along axis 0 (time level or time slab) with cells on the last axis.
"""

from dataclasses import dataclass
from typing import TypeAlias

import numpy as np
from numpy.typing import ArrayLike, NDArray

# One value per cell, or a stack of such rows over time.
FieldArray: TypeAlias = NDArray[np.float64]

MIN_CELLS = 4


class GridError(ValueError):
    """Raised when grid parameters are inadmissible."""


@dataclass(frozen=True)
class Grid:
    """Uniform cell-centred grid on (0, length)."""

    n_cells: int
    length: float

    def __post_init__(self) -> None:
        if int(self.n_cells) != self.n_cells or self.n_cells < MIN_CELLS:
            raise GridError(f"n_cells must be an integer >= {MIN_CELLS}, got {self.n_cells}")
        if not np.isfinite(self.length) or self.length <= 0:
            raise GridError(f"length must be positive, got {self.length}")

    @property
    def h(self) -> float:
        return self.length / self.n_cells

    @property
    def centers(self) -> FieldArray:
        return (np.arange(self.n_cells, dtype=np.float64) + 0.5) * self.h

    def check_field(self, values: ArrayLike, name: str = "field") -> FieldArray:
        """Return values as a float array, validating the trailing cell axis."""
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim == 0 or arr.shape[-1] != self.n_cells:
            raise GridError(f"{name} must have {self.n_cells} cells on its last axis, got shape {arr.shape}")
        return arr

    def to_dict(self) -> dict:
        return {"n_cells": self.n_cells, "length": self.length, "h": self.h}


def build_grid(length: float, n_cells: int) -> Grid:
    """Build a uniform cell-centred grid; rejects length <= 0 or n_cells < 4."""
    return Grid(n_cells=int(n_cells), length=float(length))


def mean_value(f: ArrayLike, grid: Grid) -> float | FieldArray:
    """(1/|Omega|) * sum_i f_i h, taken over the last axis."""
    arr = grid.check_field(f)
    means = np.sum(arr, axis=-1) * grid.h / grid.length
    return float(means) if np.ndim(means) == 0 else means


def spacetime_inner(u: ArrayLike, v: ArrayLike, grid: Grid, dt: float) -> float:
    """Cell-sum quadrature over Q: dt * h * sum_{n,i} u v."""
    return float(dt * grid.h * np.sum(np.asarray(u) * np.asarray(v)))


def spacetime_norm(u: ArrayLike, grid: Grid, dt: float) -> float:
    return float(np.sqrt(spacetime_inner(u, u, grid, dt)))
