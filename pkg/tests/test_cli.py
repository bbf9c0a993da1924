"""
CLI and Export Tests

Runs the command-line entry point on the desk-scale configuration and
inspects the artifacts it writes.
"""

from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from src.cli import EXIT_CONFIG, EXIT_OK, EXIT_SUITE, main
from src.config import load_run_config
from src.core import build_grid
from src.reporting import read_table, schema_header, write_profile, write_table

SMALL_CONFIG = str(Path(__file__).resolve().parents[1] / "config" / "small.yaml")


def _run(command: str, out_dir: Path, *extra: str) -> int:
    return main([command, "--config", SMALL_CONFIG, "--out", str(out_dir), "--log-level", "WARNING", *extra])


@pytest.mark.unit
class TestExport:
    """Tests for the versioned CSV and profile writers."""

    def test_header_and_exact_floats(self, tmp_path):
        values = np.array([1.0 / 3.0, np.pi, -2.5e-17])
        path = write_table(pd.DataFrame({"v": values}), tmp_path / "t.csv", "demo", "abc")
        assert path.read_text().splitlines()[0] == "# schema: demo v1; config: abc"
        assert np.array_equal(read_table(path)["v"].to_numpy(), values)

    def test_schema_header(self):
        assert schema_header("sweep", "0123") == "# schema: sweep v1; config: 0123\n"

    def test_profile_is_two_columns(self, tmp_path):
        grid = build_grid(1.0, 4)
        path = write_profile(tmp_path / "p.dat", grid.centers, np.zeros(4), "phi")
        lines = path.read_text().splitlines()
        assert lines[0] == "# x phi"
        assert len(lines) == 5
        assert all(len(line.split(" ")) == 2 for line in lines[1:])


@pytest.mark.integration
class TestSolveCommand:
    """Tests for ``vch-control solve``."""

    def test_writes_trajectory_and_resolved_config(self, out_dir):
        assert _run("solve", out_dir) == EXIT_OK
        digest = load_run_config(SMALL_CONFIG).digest()

        trajectory = out_dir / "trajectory.csv"
        assert trajectory.read_text().splitlines()[0] == f"# schema: trajectory v1; config: {digest}"
        frame = read_table(trajectory)
        assert list(frame.columns) == ["time_index", "time", "cell_index", "x", "phi", "mu", "w"]
        assert len(frame) == 21 * 16
        assert frame["phi"].abs().max() < 1.0

        resolved = (out_dir / "resolved_config.yaml").read_text()
        assert resolved.startswith(f"# digest: {digest}")
        separation = read_table(out_dir / "separation.csv")
        assert bool(separation["certified"].iloc[0])
        assert separation["evolved_margin"].iloc[0] >= separation["margin"].iloc[0]

    def test_snapshot_stride_keeps_final_level(self, out_dir):
        assert _run("solve", out_dir, "--snapshot-stride", "7") == EXIT_OK
        frame = read_table(out_dir / "trajectory.csv")
        assert sorted(frame["time_index"].unique()) == [0, 7, 14, 20]

    def test_outputs_are_deterministic(self, tmp_path):
        first, second = tmp_path / "a", tmp_path / "b"
        assert _run("solve", first) == EXIT_OK
        assert _run("solve", second) == EXIT_OK
        for name in ["trajectory.csv", "separation.csv", "resolved_config.yaml"]:
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_profiles(self, out_dir):
        assert _run("solve", out_dir, "--profiles") == EXIT_OK
        assert (out_dir / "phi_final.dat").exists()
        assert (out_dir / "phi_omega.dat").exists()


@pytest.mark.integration
class TestConfigurationErrors:
    """Invalid configurations exit with code 2 before any solve."""

    def test_nonconvexity_violation(self, out_dir):
        assert _run("solve", out_dir, "--set", "problem.potential.c2=0.5") == EXIT_CONFIG
        assert not (out_dir / "trajectory.csv").exists()

    def test_initial_data_outside_interval(self, out_dir):
        assert _run("solve", out_dir, "--set", "problem.initial.phi0.mean=1.0") == EXIT_CONFIG

    def test_missing_file(self, tmp_path):
        code = main(["solve", "--config", str(tmp_path / "absent.yaml"), "--out", str(tmp_path / "out")])
        assert code == EXIT_CONFIG


@pytest.mark.integration
class TestOptimizeCommand:
    """Tests for ``vch-control optimize``."""

    def test_large_kappa_gives_zero_control(self, out_dir):
        assert _run("optimize", out_dir, "--set", "problem.weights.kappa=100", "--profiles") == EXIT_OK
        control = read_table(out_dir / "control.csv")
        assert (control["u"] == 0.0).all()
        sparsity = read_table(out_dir / "sparsity.csv")
        assert sparsity["zero_fraction"].iloc[0] == 1.0
        for name in ["adjoint.csv", "iterations.csv", "optimizer_report.csv", "u_mid.dat", "r_mid.dat"]:
            assert (out_dir / name).exists()

    def test_report_is_monotone(self, out_dir):
        assert _run("optimize", out_dir, "--set", "problem.weights.kappa=0.001") == EXIT_OK
        report = read_table(out_dir / "optimizer_report.csv")
        assert bool(report["monotone"].iloc[0])
        assert bool(report["converged"].iloc[0])


@pytest.mark.slow
@pytest.mark.integration
class TestCheckCommand:
    """Tests for ``vch-control check``."""

    def test_suites_pass(self, out_dir):
        assert _run("check", out_dir) == EXIT_OK
        report = read_table(out_dir / "suite_report.csv")
        assert set(report["status"]) <= {"pass", "skipped", "info"}

    def test_mutation_fails(self, out_dir):
        assert _run("check", out_dir, "--mutate") == EXIT_SUITE
        report = read_table(out_dir / "suite_report.csv")
        assert (report.loc[report["suite"] == "conservation", "status"] == "fail").any()
