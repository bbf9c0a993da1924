"""
Command-line interface.

    vch-control solve    --config run.yaml [--out DIR] [--set key=value ...]
    vch-control optimize --config run.yaml [--profiles]
    vch-control sweep    --config run.yaml
    vch-control check    --config run.yaml [--mutate]

Exit codes: 0 success, 1 runtime failure, 2 configuration error,
3 property-suite failure.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ..adjoint import AdjointSolver
from ..config import ConfigError, RunConfig, dump_resolved_config, load_run_config
from ..config.settings import settings
from ..core import SingularSystemError
from ..metrics import telemetry
from ..objective import ShapeMismatchError, variational_inequality_gap
from ..optimizer import OptimizerError, kappa_sweep, minimize
from ..potential import PotentialDomainError, ResolventConvergenceError
from ..reporting import RunExporter
from ..schemas import ControlProblem
from ..state import StateSolver, StateSolverError
from ..utils import get_logger
from ..verification import run_property_suites

logger = logging.getLogger("vch_control.cli")

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2
EXIT_SUITE = 3

RUNTIME_ERRORS = (
    StateSolverError,
    OptimizerError,
    SingularSystemError,
    PotentialDomainError,
    ResolventConvergenceError,
    ShapeMismatchError,
)


class RunContext:
    """Resolved configuration, discretized problem and exporter of one command."""

    def __init__(self, config: RunConfig, out_dir: Path) -> None:
        self.config = config
        self.problem: ControlProblem = config.problem.discretize()
        self.out_dir = out_dir
        self.digest = config.digest()
        self.exporter = RunExporter(
            out_dir, self.digest, self.problem.grid, self.problem.dt, stride=config.output.snapshot_stride
        )

    @property
    def profiles(self) -> bool:
        return self.config.output.profiles


# =============================================================================
# Commands
# =============================================================================

def cmd_solve(ctx: RunContext) -> int:
    """Forward solve for the constant control optimizer.u_init."""
    problem = ctx.problem
    u = problem.project_control(np.full(problem.control_shape, ctx.config.optimizer.u_init))
    state = StateSolver(problem).solve(u)

    ctx.exporter.trajectory(state)
    ctx.exporter.table([state.separation.to_dict()], "separation")
    if ctx.profiles:
        ctx.exporter.profile("phi_final", state.phi[-1])
        ctx.exporter.profile("phi_omega", problem.targets.phi_Omega)

    report = state.separation
    logger.info(
        "forward solve done: phi in [%.6f, %.6f], margin %.3e (levels >= 1: %.3e), certificate [%.6f, %.6f]%s",
        report.phi_min, report.phi_max, report.margin, report.evolved_margin, report.r_minus, report.r_plus,
        "" if report.certified else " (NOT certified)",
    )
    return EXIT_OK


def cmd_optimize(ctx: RunContext) -> int:
    """Proximal-gradient run; writes control, state, adjoint, iterations, sparsity."""
    problem = ctx.problem
    report = minimize(problem, ctx.config.optimizer)

    exporter = ctx.exporter
    exporter.control(report.control)
    exporter.trajectory(report.state)
    exporter.adjoint(report.adjoint)
    exporter.iterations(record.to_dict() for record in report.history)
    exporter.sparsity([report.sparsity.to_row()])

    gap = variational_inequality_gap(
        report.control, report.adjoint.gradient_part, problem, seed=ctx.config.seed, tol_u=ctx.config.optimizer.tol_u
    )
    exporter.table([{**report.summary(), "vi_gap": gap, "monotone": report.is_monotone()}], "optimizer_report")

    if ctx.profiles:
        mid = problem.n_steps // 2
        exporter.profile("phi_final", report.state.phi[-1])
        exporter.profile("phi_omega", problem.targets.phi_Omega)
        exporter.profile("u_mid", report.control[mid])
        exporter.profile("r_mid", report.adjoint.gradient_part[mid])

    if not report.converged:
        logger.error("optimizer did not converge: %s (stationarity %.3e)", report.message, report.stationarity)
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_sweep(ctx: RunContext) -> int:
    """Warm-started kappa sweep."""
    sweep_cfg = ctx.config.sweep
    result = kappa_sweep(ctx.problem, ctx.config.optimizer, sweep_cfg.kappas, relative=sweep_cfg.relative_to_threshold)
    ctx.exporter.sweep(row.to_dict() for row in result.rows)
    ctx.exporter.sparsity(report.sparsity.to_row() for report in result.reports)

    if result.threshold is not None:
        logger.info("annihilation threshold max|r(u=0)| = %.10e", result.threshold)
    logger.info("smallest swept kappa with u == 0: %s", result.smallest_zero_kappa)
    if not all(row.converged for row in result.rows):
        logger.error("sweep contains non-converged runs")
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_check(ctx: RunContext, mutate: bool = False) -> int:
    """Run the property suites; exit 0 iff every suite passes."""
    config = ctx.config
    report = run_property_suites(
        ctx.problem,
        config.oracle,
        config.optimizer,
        config.second_order,
        seed=config.seed,
        mutate=mutate,
        n_workers=settings.n_workers,
    )
    ctx.exporter.suite_report(report.rows())
    print(report.summary_text())
    return EXIT_OK if report.passed else EXIT_SUITE


COMMANDS = {
    "solve": cmd_solve,
    "optimize": cmd_optimize,
    "sweep": cmd_sweep,
}


# =============================================================================
# Argument handling
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="YAML run configuration (file or directory)")
    common.add_argument("--out", default=None, help="Output directory")
    common.add_argument("--seed", type=int, default=None, help="Override the configured seed")
    common.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
        help="Dotted override, e.g. problem.weights.kappa=0.01 (repeatable)",
    )
    common.add_argument("--snapshot-stride", type=int, default=None, help="Write every k-th time level")
    common.add_argument("--profiles", action="store_true", help="Emit gnuplot profile files")
    common.add_argument("--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"])

    parser = argparse.ArgumentParser(
        prog="vch-control",
        description="Sparse optimal control of the viscous Cahn-Hilliard system",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="Forward solve and separation report")
    sub.add_parser("optimize", parents=[common], help="Proximal-gradient optimization")
    sub.add_parser("sweep", parents=[common], help="Sparsity sweep over kappa")
    check = sub.add_parser("check", parents=[common], help="Run the property suites")
    check.add_argument("--mutate", action="store_true", help="Inject a broken Laplacian into the conservation suite")
    return parser


def resolve_config_path(path: str) -> Path:
    config_path = Path(path)
    if config_path.is_dir():
        config_path = config_path / Path(settings.default_config_path).name
    return config_path


def collect_overrides(args: argparse.Namespace) -> list[str]:
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    if args.snapshot_stride is not None:
        overrides.append(f"output.snapshot_stride={args.snapshot_stride}")
    if args.profiles:
        overrides.append("output.profiles=true")
    return overrides


def resolve_out_dir(args: argparse.Namespace, config: RunConfig) -> Path:
    if args.out:
        return Path(args.out)
    if config.output.out_dir:
        return Path(config.output.out_dir)
    return Path(settings.output_dir) / args.command


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    get_logger(level=args.log_level or settings.log_level)

    try:
        config = load_run_config(resolve_config_path(args.config), collect_overrides(args))
        out_dir = resolve_out_dir(args, config)
        ctx = RunContext(config, out_dir)
    except ConfigError as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG
    except ValueError as exc:
        logger.error("invalid problem data: %s", exc)
        return EXIT_CONFIG

    dump_resolved_config(config, out_dir)
    telemetry.reset()
    logger.info("%s: output in %s (config digest %s)", args.command, out_dir, ctx.digest)

    try:
        if args.command == "check":
            code = cmd_check(ctx, mutate=args.mutate)
        else:
            code = COMMANDS[args.command](ctx)
    except RUNTIME_ERRORS as exc:
        logger.error("%s failed: %s", args.command, exc)
        code = EXIT_RUNTIME
    except Exception:
        logger.exception("%s failed with an unexpected error", args.command)
        code = EXIT_RUNTIME

    logger.info("solver telemetry: %s", telemetry.snapshot())
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
