"""Numerical substrate: grid, banded operators, Neumann Laplacian, quadrature."""

from .banded import BandedOperator, SingularSystemError, neumann_laplacian, solve_banded
from .grid import (
    FieldArray,
    Grid,
    GridError,
    build_grid,
    mean_value,
    spacetime_inner,
    spacetime_norm,
)

__all__ = [
    "BandedOperator",
    "FieldArray",
    "Grid",
    "GridError",
    "SingularSystemError",
    "build_grid",
    "mean_value",
    "neumann_laplacian",
    "solve_banded",
    "spacetime_inner",
    "spacetime_norm",
]
