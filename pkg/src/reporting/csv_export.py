"""
Versioned CSV and profile export.

Every CSV starts with one comment line naming its schema, the schema
version and the digest of the resolved configuration:

    # schema: trajectory v1; config: 0123456789abcdef

followed by a pandas-written table. Floats use settings.csv_float_format so
identical runs produce byte-identical files.
"""

import logging
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..adjoint import AdjointTrajectory
from ..config.settings import settings
from ..core import Grid
from ..state import StateTrajectory

logger = logging.getLogger("vch_control.reporting")

SCHEMA_VERSION = 1

TRAJECTORY_COLUMNS = ["time_index", "time", "cell_index", "x", "phi", "mu", "w"]
ADJOINT_COLUMNS = ["time_index", "time", "cell_index", "x", "p", "q", "r"]
CONTROL_COLUMNS = ["time_index", "time", "cell_index", "x", "u"]
SPARSITY_COLUMNS = ["kappa", "zero_fraction", "violations_a", "violations_b", "J_total", "norm_u_L1"]


def schema_header(schema: str, digest: str) -> str:
    return f"# schema: {schema} v{SCHEMA_VERSION}; config: {digest}\n"


def write_table(frame: pd.DataFrame, path: Union[str, Path], schema: str, digest: str) -> Path:
    """Write one versioned CSV."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", newline="") as f:
        f.write(schema_header(schema, digest))
        frame.to_csv(f, index=False, float_format=settings.csv_float_format, lineterminator="\n")
    logger.debug("wrote %s (%d rows)", target, len(frame))
    return target


def read_table(path: Union[str, Path]) -> pd.DataFrame:
    """Read a versioned CSV back, skipping the header comment."""
    return pd.read_csv(path, comment="#", float_precision="round_trip")


def _levels(n_levels: int, stride: int) -> np.ndarray:
    levels = np.arange(0, n_levels, stride)
    if levels[-1] != n_levels - 1:
        levels = np.append(levels, n_levels - 1)
    return levels


def _long_frame(
    grid: Grid,
    dt: float,
    levels: np.ndarray,
    fields: dict[str, np.ndarray],
) -> pd.DataFrame:
    n = grid.n_cells
    data: dict[str, np.ndarray] = {
        "time_index": np.repeat(levels, n),
        "time": np.repeat(levels * dt, n),
        "cell_index": np.tile(np.arange(n), levels.size),
        "x": np.tile(grid.centers, levels.size),
    }
    for name, values in fields.items():
        data[name] = np.asarray(values)[levels].ravel()
    return pd.DataFrame(data)


def trajectory_frame(state: StateTrajectory, grid: Grid, dt: float, stride: int = 1) -> pd.DataFrame:
    levels = _levels(state.phi.shape[0], stride)
    return _long_frame(grid, dt, levels, {"phi": state.phi, "mu": state.mu, "w": state.w})


def adjoint_frame(adjoint: AdjointTrajectory, grid: Grid, dt: float, stride: int = 1) -> pd.DataFrame:
    levels = _levels(adjoint.p.shape[0], stride)
    return _long_frame(grid, dt, levels, {"p": adjoint.p, "q": adjoint.q, "r": adjoint.r})


def control_frame(u: np.ndarray, grid: Grid, dt: float) -> pd.DataFrame:
    """Control slabs n = 0..N-1; time is the slab start."""
    return _long_frame(grid, dt, np.arange(u.shape[0]), {"u": u})


def records_frame(records: Iterable[dict], columns: Optional[Sequence[str]] = None) -> pd.DataFrame:
    frame = pd.DataFrame(list(records))
    if columns is not None:
        frame = frame.reindex(columns=list(columns))
    return frame


def write_profile(path: Union[str, Path], x: np.ndarray, values: np.ndarray, label: str) -> Path:
    """Gnuplot-compatible two-column file: ``x value``."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame({"x": x, "value": values})
    with open(target, "w", newline="") as f:
        f.write(f"# x {label}\n")
        frame.to_csv(f, sep=" ", header=False, index=False, float_format=settings.csv_float_format, lineterminator="\n")
    return target


class RunExporter:
    """Writes the artifacts of one run into a single output directory."""

    def __init__(self, out_dir: Union[str, Path], digest: str, grid: Grid, dt: float, stride: int = 1) -> None:
        self.out_dir = Path(out_dir)
        self.digest = digest
        self.grid = grid
        self.dt = dt
        self.stride = stride
        self.out_dir.mkdir(parents=True, exist_ok=True)

    def _write(self, frame: pd.DataFrame, schema: str) -> Path:
        return write_table(frame, self.out_dir / f"{schema}.csv", schema, self.digest)

    def trajectory(self, state: StateTrajectory) -> Path:
        return self._write(trajectory_frame(state, self.grid, self.dt, self.stride), "trajectory")

    def adjoint(self, adjoint: AdjointTrajectory) -> Path:
        return self._write(adjoint_frame(adjoint, self.grid, self.dt, self.stride), "adjoint")

    def control(self, u: np.ndarray) -> Path:
        return self._write(control_frame(u, self.grid, self.dt), "control")

    def iterations(self, records: Iterable[dict]) -> Path:
        return self._write(records_frame(records), "iterations")

    def sparsity(self, rows: Iterable[dict]) -> Path:
        return self._write(records_frame(rows, SPARSITY_COLUMNS), "sparsity")

    def sweep(self, rows: Iterable[dict]) -> Path:
        return self._write(records_frame(rows), "sweep")

    def suite_report(self, rows: Iterable[dict]) -> Path:
        return self._write(records_frame(rows), "suite_report")

    def table(self, records: Iterable[dict], schema: str) -> Path:
        return self._write(records_frame(records), schema)

    def profile(self, name: str, values: np.ndarray) -> Path:
        return write_profile(self.out_dir / f"{name}.dat", self.grid.centers, values, name)
