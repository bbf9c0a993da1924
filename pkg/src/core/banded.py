"""
Banded operators and direct banded solves.

Operators are stored in the LAPACK / scipy "ab" layout: for lower bandwidth
l and upper bandwidth u, ``bands[u + i - j, j] == A[i, j]``. Products and
transposes go through scipy.sparse; solves through scipy.linalg.solve_banded.
"""

import logging
from dataclasses import dataclass
from typing import Mapping

import numpy as np
import scipy.linalg
import scipy.sparse
from numpy.typing import ArrayLike

from .grid import FieldArray, Grid

logger = logging.getLogger("vch_control.core")

# Tolerance for "row sums vanish", relative to the largest band entry.
NULLSPACE_RTOL = 64 * np.finfo(np.float64).eps
RESIDUAL_RTOL = 1e-12


class SingularSystemError(ArithmeticError):
    """Raised when a banded system is singular (e.g. pure Neumann Laplacian)."""


@dataclass(frozen=True, eq=False)
class BandedOperator:
    """Square banded matrix in ab storage."""

    bands: np.ndarray
    lower: int
    upper: int

    def __post_init__(self) -> None:
        if self.bands.ndim != 2 or self.bands.shape[0] != self.lower + self.upper + 1:
            raise ValueError(
                f"bands shape {self.bands.shape} inconsistent with bandwidths ({self.lower}, {self.upper})"
            )

    @property
    def n(self) -> int:
        return int(self.bands.shape[1])

    @property
    def bandwidth(self) -> int:
        return max(self.lower, self.upper)

    @classmethod
    def from_diagonals(cls, diagonals: Mapping[int, ArrayLike], n: int) -> "BandedOperator":
        """Build from {offset: values}; offset d holds entries A[i, i + d]."""
        offsets = list(diagonals)
        lower = max(0, -min(offsets))
        upper = max(0, max(offsets))
        bands = np.zeros((lower + upper + 1, n))
        for d, values in diagonals.items():
            size = n - abs(d)
            if size <= 0:
                continue
            row = upper - d
            vals = np.broadcast_to(np.asarray(values, dtype=np.float64), (size,))
            if d >= 0:
                bands[row, d:] = vals
            else:
                bands[row, : n + d] = vals
        return cls(bands=bands, lower=lower, upper=upper)

    @classmethod
    def identity(cls, n: int) -> "BandedOperator":
        return cls.from_diagonals({0: np.ones(n)}, n)

    @classmethod
    def from_sparse(cls, matrix, lower: int, upper: int) -> "BandedOperator":
        n = matrix.shape[0]
        return cls.from_diagonals({d: matrix.diagonal(d) for d in range(-lower, upper + 1)}, n)

    def diagonal(self, d: int) -> FieldArray:
        n = self.n
        if d > self.upper or -d > self.lower:
            return np.zeros(max(n - abs(d), 0))
        row = self.upper - d
        if d >= 0:
            return self.bands[row, d:].copy()
        return self.bands[row, : n + d].copy()

    def offsets(self) -> range:
        return range(-self.lower, self.upper + 1)

    def matvec(self, x: ArrayLike) -> FieldArray:
        x = np.asarray(x, dtype=np.float64)
        n = self.n
        y = np.zeros(n)
        for d in self.offsets():
            diag = self.diagonal(d)
            if d >= 0:
                y[: n - d] += diag * x[d:]
            else:
                y[-d:] += diag * x[: n + d]
        return y

    def __matmul__(self, x: ArrayLike) -> FieldArray:
        return self.matvec(x)

    def padded(self, lower: int, upper: int) -> "BandedOperator":
        """Same matrix stored with (at least) the given bandwidths."""
        lower = max(lower, self.lower)
        upper = max(upper, self.upper)
        if (lower, upper) == (self.lower, self.upper):
            return self
        bands = np.zeros((lower + upper + 1, self.n))
        bands[upper - self.upper: upper + self.lower + 1] = self.bands
        return BandedOperator(bands=bands, lower=lower, upper=upper)

    def __add__(self, other: "BandedOperator") -> "BandedOperator":
        lower = max(self.lower, other.lower)
        upper = max(self.upper, other.upper)
        a = self.padded(lower, upper)
        b = other.padded(lower, upper)
        return BandedOperator(bands=a.bands + b.bands, lower=lower, upper=upper)

    def scaled(self, factor: float) -> "BandedOperator":
        return BandedOperator(bands=self.bands * factor, lower=self.lower, upper=self.upper)

    def shifted(self, shift: ArrayLike = 0.0, scale: float = 1.0) -> "BandedOperator":
        """Return diag(shift) + scale * self."""
        bands = self.bands * scale
        bands[self.upper] = bands[self.upper] + np.broadcast_to(np.asarray(shift, dtype=np.float64), (self.n,))
        return BandedOperator(bands=bands, lower=self.lower, upper=self.upper)

    def scale_columns(self, d: ArrayLike) -> "BandedOperator":
        """Return self @ diag(d)."""
        return BandedOperator(bands=self.bands * np.asarray(d)[None, :], lower=self.lower, upper=self.upper)

    def compose(self, other: "BandedOperator") -> "BandedOperator":
        """Return self @ other as a banded operator."""
        product = self.to_sparse() @ other.to_sparse()
        return BandedOperator.from_sparse(product.todia(), self.lower + other.lower, self.upper + other.upper)

    def transpose(self) -> "BandedOperator":
        return BandedOperator.from_diagonals({-d: self.diagonal(d) for d in self.offsets()}, self.n)

    @property
    def T(self) -> "BandedOperator":
        return self.transpose()

    def to_sparse(self) -> scipy.sparse.csr_matrix:
        offsets = list(self.offsets())
        return scipy.sparse.diags(
            [self.diagonal(d) for d in offsets], offsets, shape=(self.n, self.n), format="csr"
        )

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()

    def row_sums(self) -> FieldArray:
        return self.matvec(np.ones(self.n))

    def is_symmetric(self, atol: float = 0.0) -> bool:
        return all(
            np.allclose(self.diagonal(d), self.diagonal(-d), rtol=0.0, atol=atol)
            for d in range(1, self.bandwidth + 1)
        )


def neumann_laplacian(grid: Grid) -> BandedOperator:
    """
    Discrete Laplacian with homogeneous Neumann conditions via mirror ghosts.

    Interior rows carry (1, -2, 1)/h^2, boundary rows (-1, 1)/h^2, so every
    row sums to zero and the matrix is symmetric.
    """
    n = grid.n_cells
    inv_h2 = 1.0 / grid.h**2
    main = np.full(n, -2.0 * inv_h2)
    main[0] = main[-1] = -inv_h2
    off = np.full(n - 1, inv_h2)
    return BandedOperator.from_diagonals({-1: off, 0: main, 1: off}, n)


def solve_banded(
    operator: BandedOperator,
    rhs: ArrayLike,
    shift: ArrayLike = 0.0,
    scale: float = 1.0,
) -> FieldArray:
    """
    Solve (diag(shift) + scale * operator) x = rhs by banded LU.

    Raises SingularSystemError when the shifted operator annihilates
    constants (zero row sums) or LAPACK reports a zero pivot.
    """
    system = operator.shifted(shift, scale) if (np.any(shift) or scale != 1.0) else operator
    rhs = np.asarray(rhs, dtype=np.float64)

    magnitude = float(np.max(np.abs(system.bands)))
    if magnitude == 0.0:
        raise SingularSystemError("zero operator")
    if np.max(np.abs(system.row_sums())) <= NULLSPACE_RTOL * magnitude:
        raise SingularSystemError("operator annihilates constants; add a shift or a mean constraint")

    try:
        x = scipy.linalg.solve_banded((system.lower, system.upper), system.bands, rhs)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SingularSystemError(f"banded solve failed: {exc}") from exc

    if not np.all(np.isfinite(x)):
        raise SingularSystemError("banded solve produced non-finite values")

    if logger.isEnabledFor(logging.DEBUG):
        residual = float(np.max(np.abs(system.matvec(x) - rhs)))
        scale_ref = max(float(np.max(np.abs(rhs))), np.finfo(np.float64).tiny)
        if residual > RESIDUAL_RTOL * scale_ref:
            logger.debug("banded residual %.3e exceeds %.1e relative", residual, RESIDUAL_RTOL)
    return x
