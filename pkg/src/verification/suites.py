"""
Property Suites

Each suite checks one family of structural properties of the discrete
problem and records pass / fail / skipped outcomes with the measured
metric, the threshold and the seed. The engine runs suites independently;
a suite that raises becomes a failed entry instead of aborting the run.
"""

import logging
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from threading import Lock
from typing import Callable, Optional

import numpy as np

from ..adjoint import AdjointSolver
from ..core import BandedOperator, mean_value, neumann_laplacian, spacetime_inner, spacetime_norm
from ..objective import (
    KAPPA_ZERO,
    hessian_quadratic_form,
    hessian_tracking_terms,
    reduced_gradient,
    stationarity_residual,
)
from ..optimizer import (
    OptimizerReport,
    annihilation_threshold,
    kappa_sweep,
    minimize,
    second_order_check,
)
from ..potential import f1_deriv, f1_value, yosida_deriv, yosida_value
from ..schemas import ControlProblem, OptimizerConfig, OracleConfig, SecondOrderConfig
from ..sensitivity import SensitivitySolver
from ..state import StateSolver, StateSolverError, StateTrajectory
from .oracles import SmoothObjective, fd_gradient, fd_second_difference, smooth_direction, taylor_order

logger = logging.getLogger("vch_control.verification")

PASS, FAIL, SKIPPED, INFO = "pass", "fail", "skipped", "info"
YOSIDA_EPS = (1e-1, 1e-2, 1e-3)
SEPARATION_SCALES = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class CheckOutcome:
    suite: str
    check: str
    status: str
    metric: Optional[float] = None
    threshold: Optional[float] = None
    detail: str = ""
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SuiteResult:
    """Outcomes of one suite."""

    name: str
    checks: list[CheckOutcome] = field(default_factory=list)

    @property
    def status(self) -> str:
        statuses = {c.status for c in self.checks if c.status != INFO}
        if FAIL in statuses or not statuses:
            return FAIL
        if statuses == {SKIPPED}:
            return SKIPPED
        return PASS

    def add_check(
        self,
        check: str,
        passed: bool,
        metric: Optional[float] = None,
        threshold: Optional[float] = None,
        detail: str = "",
        seed: Optional[int] = None,
    ) -> None:
        """Record one comparison."""
        self.checks.append(
            CheckOutcome(
                suite=self.name,
                check=check,
                status=PASS if passed else FAIL,
                metric=None if metric is None else float(metric),
                threshold=threshold,
                detail=detail,
                seed=seed,
            )
        )

    def skip(self, check: str, reason: str) -> None:
        self.checks.append(CheckOutcome(suite=self.name, check=check, status=SKIPPED, detail=reason))

    def note(self, check: str, metric: Optional[float] = None, detail: str = "") -> None:
        """Record a diagnostic that is reported but never fails the suite."""
        self.checks.append(
            CheckOutcome(
                suite=self.name,
                check=check,
                status=INFO,
                metric=None if metric is None else float(metric),
                detail=detail,
            )
        )


@dataclass
class SuiteReport:
    results: list[SuiteResult]
    seed: int
    mutated: bool = False

    @property
    def passed(self) -> bool:
        return all(result.status != FAIL for result in self.results)

    def rows(self) -> list[dict]:
        return [check.to_dict() for result in self.results for check in result.checks]

    def status_of(self, name: str) -> str:
        return next(result.status for result in self.results if result.name == name)

    def summary_text(self) -> str:
        lines = [f"property suites (seed {self.seed}{', mutation mode' if self.mutated else ''})"]
        for result in self.results:
            lines.append(f"  {result.name:<14} {result.status.upper()}")
            for check in result.checks:
                if check.status == FAIL:
                    metric = "" if check.metric is None else f" metric={check.metric:.3e}"
                    threshold = "" if check.threshold is None else f" threshold={check.threshold:.3e}"
                    lines.append(f"      - {check.check}:{metric}{threshold} {check.detail}".rstrip())
        lines.append("ALL SUITES PASSED" if self.passed else "SUITE FAILURES PRESENT")
        return "\n".join(lines)


class SuiteContext:
    """Shared inputs and lazily computed artifacts (thread-safe)."""

    def __init__(
        self,
        problem: ControlProblem,
        oracle: OracleConfig,
        optimizer: OptimizerConfig,
        second_order: SecondOrderConfig,
        seed: int = 0,
        mutate: bool = False,
    ) -> None:
        self.problem = problem
        self.oracle = oracle
        self.optimizer = optimizer
        self.second_order = second_order
        self.seed = seed
        self.mutate = mutate
        self._lock = Lock()
        self._controls: Optional[list[np.ndarray]] = None
        self._trajectories: Optional[list[StateTrajectory]] = None
        self._threshold: Optional[float] = None
        self._optimum: Optional[OptimizerReport] = None

    def rng(self, offset: int = 0) -> np.random.Generator:
        return np.random.default_rng(self.seed + offset)

    def random_control(self, rng: np.random.Generator, amplitude: Optional[float] = None) -> np.ndarray:
        bounds = self.problem.bounds
        if amplitude is None:
            return rng.uniform(bounds.u_lb, bounds.u_ub, size=self.problem.control_shape)
        return rng.uniform(-amplitude, amplitude, size=self.problem.control_shape)

    def controls(self) -> list[np.ndarray]:
        """u = 0 plus the configured number of random admissible controls."""
        with self._lock:
            if self._controls is None:
                rng = self.rng(100)
                self._controls = [self.problem.zero_control()] + [
                    self.random_control(rng) for _ in range(self.oracle.random_controls)
                ]
            return self._controls

    def trajectories(self) -> list[StateTrajectory]:
        controls = self.controls()
        with self._lock:
            if self._trajectories is None:
                stepper = StateSolver(self.problem)
                self._trajectories = [stepper.solve(u) for u in controls]
            return self._trajectories

    def threshold(self) -> float:
        with self._lock:
            if self._threshold is None:
                self._threshold = annihilation_threshold(self.problem)
            return self._threshold

    def optimum(self) -> OptimizerReport:
        with self._lock:
            if self._optimum is None:
                self._optimum = minimize(self.problem, self.optimizer)
            return self._optimum


class BasePropertySuite(ABC):
    """Base class for all property suites."""

    name: str = "suite"

    @abstractmethod
    def run(self, context: SuiteContext) -> SuiteResult:
        """Execute the checks and return their outcomes."""


class PotentialSuite(BasePropertySuite):
    """Moreau-Yosida properties on sampled (r, eps) grids."""

    name = "potential"

    def run(self, context: SuiteContext) -> SuiteResult:
        result = SuiteResult(self.name)
        params = context.problem.potential
        per_eps = context.oracle.potential_samples // len(YOSIDA_EPS)
        r = np.linspace(-3.0, 3.0, per_eps)
        interior = r[np.abs(r) < 1.0]

        for eps in YOSIDA_EPS:
            d = np.asarray(yosida_deriv(r, eps, params))
            slopes = np.diff(d) / np.diff(r)
            result.add_check(f"monotone eps={eps:g}", bool(np.all(slopes >= -1e-12)), metric=float(np.min(slopes)))
            lipschitz = float(np.max(slopes)) * eps
            result.add_check(f"lipschitz eps={eps:g}", lipschitz <= 1.0 + 1e-9, metric=lipschitz, threshold=1.0)
            at_zero = abs(float(yosida_deriv(0.0, eps, params)))
            result.add_check(f"zero at origin eps={eps:g}", at_zero <= 1e-14, metric=at_zero, threshold=1e-14)

            exact = np.abs(np.asarray(f1_deriv(interior, 1, params)))
            regular = np.abs(np.asarray(yosida_deriv(interior, eps, params)))
            excess = float(np.max(regular - exact * (1.0 + 1e-12)))
            result.add_check(f"derivative bound eps={eps:g}", excess <= 1e-12, metric=excess, threshold=1e-12)

            envelope = np.asarray(yosida_value(interior, eps, params))
            f1 = np.asarray(f1_value(interior, params))
            below = float(np.min(envelope))
            above = float(np.max(envelope - f1 - 1e-12 * (1.0 + f1)))
            result.add_check(
                f"envelope ordering eps={eps:g}",
                below >= -1e-14 and above <= 0.0,
                metric=max(-below, above),
                threshold=0.0,
            )

        for point in (-0.9, 0.0, 0.5):
            errors = [abs(float(yosida_deriv(point, eps, params)) - float(f1_deriv(point, 1, params))) for eps in YOSIDA_EPS]
            decays = all(b <= a + 1e-14 for a, b in zip(errors, errors[1:]))
            result.add_check(f"consistency r={point:g}", decays, metric=errors[-1], detail=str(errors))
        return result


class ConservationSuite(BasePropertySuite):
    """Mean of phi is invariant at every level of every forward solve."""

    name = "conservation"

    def run(self, context: SuiteContext) -> SuiteResult:
        result = SuiteResult(self.name)
        problem = context.problem
        tol = context.oracle.mass_tol
        if context.mutate:
            laplacian = neumann_laplacian(problem.grid)
            bands = laplacian.bands.copy()
            bands[laplacian.upper, 0] *= 2.0  # boundary row no longer sums to zero
            stepper = StateSolver(problem, laplacian=BandedOperator(bands, laplacian.lower, laplacian.upper))
            trajectories = []
            for index, u in enumerate(context.controls()):
                try:
                    trajectories.append(stepper.solve(u))
                except StateSolverError as exc:
                    result.add_check(f"forward solve {index}", False, detail=str(exc), seed=context.seed)
        else:
            trajectories = context.trajectories()

        m0 = problem.initial.mass(problem.grid)
        for index, trajectory in enumerate(trajectories):
            drift = float(np.max(np.abs(np.asarray(mean_value(trajectory.phi, problem.grid)) - m0)))
            result.add_check(f"mean drift control {index}", drift <= tol, metric=drift, threshold=tol, seed=context.seed)
        return result


class SeparationSuite(BasePropertySuite):
    """Trajectories stay a margin away from +-1 and inside the certificate."""

    name = "separation"

    def run(self, context: SuiteContext) -> SuiteResult:
        result = SuiteResult(self.name)
        problem = context.problem
        tol = context.oracle.margin_tol
        for index, trajectory in enumerate(context.trajectories()):
            report = trajectory.separation
            result.add_check(f"margin control {index}", report.margin > tol, metric=report.margin, threshold=tol)
            result.note(
                f"evolved margin control {index}",
                metric=report.evolved_margin,
                detail=f"levels >= 1; all levels {report.margin:.10f}",
            )
            result.add_check(
                f"certificate control {index}",
                report.certified,
                detail=f"[{report.r_minus:.6f}, {report.r_plus:.6f}] vs [{report.phi_min:.6f}, {report.phi_max:.6f}]",
            )

        # margin against |u|_inf along one smooth control profile, scaled up to the box
        bounds = problem.bounds
        reach = max(abs(bounds.u_lb), abs(bounds.u_ub))
        direction = smooth_direction(problem, context.rng(150))
        stepper = StateSolver(problem)
        table = []
        for scale in SEPARATION_SCALES:
            u = problem.project_control(scale * reach * direction)
            table.append((float(np.max(np.abs(u))), stepper.solve(u).separation.evolved_margin))
        increase = max(0.0, max(after[1] - before[1] for before, after in zip(table, table[1:])))
        result.note(
            "margin against control size",
            metric=increase,
            detail="; ".join(f"|u|={size:.3g}: {margin:.6e}" for size, margin in table),
        )
        return result


def _base_and_directions(context: SuiteContext, offset: int) -> tuple[np.ndarray, list[np.ndarray]]:
    rng = context.rng(offset)
    u = context.random_control(rng, amplitude=1.0)
    directions = [smooth_direction(context.problem, rng) for _ in range(context.oracle.taylor_directions)]
    return u, directions


def _taylor_scan(
    stepper: StateSolver,
    u: np.ndarray,
    h: np.ndarray,
    base: StateTrajectory,
    steps: list[float],
    expansion: Callable[[float], np.ndarray],
) -> tuple[list[float], list[float]]:
    """Remainders |phi(u+sh) - phi(u) - expansion(s)| and increments |phi(u+sh) - phi(u)| over levels 1..N."""
    grid, dt = stepper.problem.grid, stepper.problem.dt
    remainders, increments = [], []
    for s in steps:
        delta = stepper.solve(u + s * h, check_bounds=False).phi[1:] - base.phi[1:]
        increments.append(spacetime_norm(delta, grid, dt))
        remainders.append(spacetime_norm(delta - expansion(s), grid, dt))
    return remainders, increments


class LinearizedSuite(BasePropertySuite):
    """Taylor remainder, mean-free increments and step-Jacobian consistency."""

    name = "linearized"

    def run(self, context: SuiteContext) -> SuiteResult:
        result = SuiteResult(self.name)
        problem = context.problem
        grid, dt = problem.grid, problem.dt
        u, directions = _base_and_directions(context, 200)
        stepper = StateSolver(problem)
        base = stepper.solve(u, check_bounds=False)
        sensitivity = SensitivitySolver(problem, base)
        steps = context.oracle.taylor_steps

        for index, h in enumerate(directions):
            xi = sensitivity.linearized(h).xi
            remainders, increments = _taylor_scan(stepper, u, h, base, steps, lambda s: s * xi[1:])
            order = taylor_order(steps, remainders, increments)
            result.add_check(
                f"taylor order direction {index}",
                order >= context.oracle.linear_order,
                metric=order,
                threshold=context.oracle.linear_order,
                detail=" ".join(f"{r:.2e}" for r in remainders),
                seed=context.seed,
            )
            drift = float(np.max(np.abs(np.asarray(mean_value(xi, grid)))))
            result.add_check(f"mean-free xi direction {index}", drift <= 1e-12, metric=drift, threshold=1e-12)

        # directional derivative of the step residual along the linearized solution, scaled to unit size
        lin = sensitivity.linearized(directions[0])
        n = problem.n_steps // 2
        size = max(
            float(np.max(np.abs(lin.xi[n + 1]))),
            float(np.max(np.abs(lin.xi[n]))),
            float(np.max(np.abs(lin.v[n + 1]))),
        )
        d_next, d_prev, d_w = lin.xi[n + 1] / size, lin.xi[n] / size, lin.v[n + 1] / size
        fd_step = 1e-5
        _, f_plus = stepper.step_residual(
            base.phi[n + 1] + fd_step * d_next, base.phi[n] + fd_step * d_prev, base.w[n + 1] + fd_step * d_w
        )
        _, f_minus = stepper.step_residual(
            base.phi[n + 1] - fd_step * d_next, base.phi[n] - fd_step * d_prev, base.w[n + 1] - fd_step * d_w
        )
        derivative = (f_plus - f_minus) / (2.0 * fd_step)
        linear_terms = (
            float(np.max(np.abs(stepper.step_jacobian(base.phi[n + 1]).matvec(d_next))))
            + float(np.max(np.abs(sensitivity.viscous.matvec(d_prev))))
            + dt * float(np.max(np.abs(stepper.laplacian.matvec(d_w))))
        )
        relative = float(np.max(np.abs(derivative))) / linear_terms
        result.add_check("step jacobian consistency", relative <= 1e-6, metric=relative, threshold=1e-6)
        return result


class BilinearizedSuite(BasePropertySuite):
    """z == 0, symmetry in (h, k) and second-order Taylor remainder."""

    name = "bilinearized"

    def run(self, context: SuiteContext) -> SuiteResult:
        result = SuiteResult(self.name)
        problem = context.problem
        grid = problem.grid
        u, directions = _base_and_directions(context, 300)
        stepper = StateSolver(problem)
        base = stepper.solve(u, check_bounds=False)
        sensitivity = SensitivitySolver(problem, base, cache=True)
        steps = context.oracle.bilinear_taylor_steps

        for index, h in enumerate(directions):
            xi = sensitivity.linearized(h).xi
            second = sensitivity.bilinearized(h, h)
            result.add_check(f"z identically zero direction {index}", not np.any(second.z))
            remainders, increments = _taylor_scan(
                stepper, u, h, base, steps, lambda s: s * xi[1:] + 0.5 * s**2 * second.psi[1:]
            )
            order = taylor_order(steps, remainders, increments)
            result.add_check(
                f"taylor order direction {index}",
                order >= context.oracle.bilinear_order,
                metric=order,
                threshold=context.oracle.bilinear_order,
                detail=" ".join(f"{r:.2e}" for r in remainders),
                seed=context.seed,
            )
            drift = float(np.max(np.abs(np.asarray(mean_value(second.psi, grid)))))
            result.add_check(f"mean-free psi direction {index}", drift <= 1e-12, metric=drift, threshold=1e-12)

        if len(directions) >= 2:
            hk = sensitivity.bilinearized(directions[0], directions[1]).psi
            kh = sensitivity.bilinearized(directions[1], directions[0]).psi
            asym = float(np.max(np.abs(hk - kh))) / max(float(np.max(np.abs(hk))), 1e-300)
            result.add_check("symmetry", asym <= context.oracle.symmetry_tol, metric=asym, threshold=context.oracle.symmetry_tol)
        return result


class AdjointSuite(BasePropertySuite):
    """Adjoint-linearized duality and gradient agreement with finite differences."""

    name = "adjoint"

    def run(self, context: SuiteContext) -> SuiteResult:
        result = SuiteResult(self.name)
        problem = context.problem
        grid, dt = problem.grid, problem.dt
        weights, targets = problem.weights, problem.targets
        cfg = context.oracle

        u = context.random_control(context.rng(400), amplitude=1.0)
        stepper = StateSolver(problem)
        base = stepper.solve(u, check_bounds=False)
        adjoint = AdjointSolver(problem, base, stepper=stepper).solve()
        sensitivity = SensitivitySolver(problem, base)
        gradient = reduced_gradient(u, adjoint, weights)
        objective = SmoothObjective(problem)

        combo_error = float(np.max(np.abs(adjoint.combo[-1] - weights.b2 * (base.phi[-1] - targets.phi_Omega))))
        result.add_check("terminal combo", combo_error <= 1e-14, metric=combo_error)
        result.add_check("terminal r", not np.any(adjoint.r[-1]))
        lap = stepper.laplacian
        gauge = max(float(np.max(np.abs(-lap.matvec(p) - q))) for p, q in zip(adjoint.p, adjoint.q))
        gauge_scale = max(float(np.max(np.abs(adjoint.q))), 1e-300)
        result.add_check("-Lap p = q", gauge / gauge_scale <= 1e-8, metric=gauge / gauge_scale, threshold=1e-8)

        for seed in cfg.seeds:
            h = context.random_control(np.random.default_rng(context.seed + 1000 + seed), amplitude=1.0)
            xi = sensitivity.linearized(h).xi
            pairing = spacetime_inner(adjoint.gradient_part, h, grid, dt)
            tracking = (
                weights.b1 * spacetime_inner(xi[1:], base.phi[1:] - targets.phi_Q[1:], grid, dt)
                + weights.b2 * grid.h * float(np.sum(xi[-1] * (base.phi[-1] - targets.phi_Omega)))
            )
            duality = abs(pairing - tracking) / max(abs(tracking), abs(pairing), 1e-300)
            result.add_check(f"duality h#{seed}", duality <= cfg.duality_tol, metric=duality, threshold=cfg.duality_tol, seed=seed)

            analytic = spacetime_inner(gradient, h, grid, dt)
            estimate = fd_gradient(u, h, problem, cfg, objective=objective)
            error = abs(analytic - estimate.value) / max(1.0, abs(analytic))
            result.add_check(
                f"gradient vs FD h#{seed}",
                error <= cfg.gradient_tol,
                metric=error,
                threshold=cfg.gradient_tol,
                detail=f"fd step {estimate.step:.1e}, oracle error {estimate.error_estimate:.1e}",
                seed=seed,
            )
        return result


class HessianSuite(BasePropertySuite):
    """Second-derivative form: symmetry, adjoint-free identity and FD agreement."""

    name = "hessian"

    def run(self, context: SuiteContext) -> SuiteResult:
        result = SuiteResult(self.name)
        problem = context.problem
        grid, dt = problem.grid, problem.dt
        cfg = context.oracle
        u, directions = _base_and_directions(context, 500)
        stepper = StateSolver(problem)
        base = stepper.solve(u, check_bounds=False)
        adjoint = AdjointSolver(problem, base, stepper=stepper).solve()
        sensitivity = SensitivitySolver(problem, base, cache=True)
        objective = SmoothObjective(problem)

        if len(directions) >= 2:
            h, k = directions[0], directions[1]
            hk = hessian_quadratic_form(u, h, k, base, adjoint, problem, sensitivity)
            kh = hessian_quadratic_form(u, k, h, base, adjoint, problem, sensitivity)
            asym = abs(hk - kh) / max(1.0, abs(hk))
            result.add_check("symmetry", asym <= cfg.symmetry_tol, metric=asym, threshold=cfg.symmetry_tol)

        for index, h in enumerate(directions):
            form = hessian_quadratic_form(u, h, h, base, adjoint, problem, sensitivity)
            control = problem.weights.b3 * spacetime_inner(h, h, grid, dt)
            tracking = hessian_tracking_terms(h, base, problem, sensitivity)
            identity = abs(form - control - tracking) / max(abs(tracking), abs(form - control), 1e-300)
            result.add_check(f"tracking identity direction {index}", identity <= 1e-10, metric=identity, threshold=1e-10)

            estimate = fd_second_difference(u, h, problem, cfg, objective=objective)
            error = abs(form - estimate.value) / max(1.0, abs(form))
            result.add_check(
                f"FD agreement direction {index}",
                error <= cfg.hessian_tol,
                metric=error,
                threshold=cfg.hessian_tol,
                detail=f"fd step {estimate.step:.1e}, oracle error {estimate.error_estimate:.1e}",
                seed=context.seed,
            )
        return result


class SparsitySuite(BasePropertySuite):
    """Sparsity equivalence and projection-formula fixed point on converged runs."""

    name = "sparsity"

    def run(self, context: SuiteContext) -> SuiteResult:
        result = SuiteResult(self.name)
        problem = context.problem
        threshold = context.threshold()
        if threshold <= KAPPA_ZERO:
            result.skip("sparsity", f"max|r| at u=0 is {threshold:.3e}: kappa below numerical zero")
            return result
        if not problem.bounds.brackets_zero:
            result.skip("sparsity", "bounds do not bracket zero")
            return result

        sweep = kappa_sweep(problem, context.optimizer, context.oracle.sparsity_kappas, relative=True)
        bounds = problem.bounds
        for row, report in zip(sweep.rows, sweep.reports):
            label = f"kappa={row.kappa:.4g}"
            result.add_check(f"converged {label}", report.converged, metric=report.stationarity)
            result.add_check(f"violations_a {label}", report.sparsity.violations_a == 0, metric=report.sparsity.violations_a)
            result.add_check(f"violations_b {label}", report.sparsity.violations_b == 0, metric=report.sparsity.violations_b)
            weights = problem.weights.model_copy(update={"kappa": row.kappa})
            fixed = stationarity_residual(report.control, report.adjoint.gradient_part, weights, bounds.u_lb, bounds.u_ub)
            result.add_check(
                f"fixed point {label}", fixed <= context.optimizer.stat_tol, metric=fixed, threshold=context.optimizer.stat_tol
            )
        fractions = [row.zero_fraction for row in sweep.rows]
        monotone = all(b >= a for a, b in zip(fractions, fractions[1:]))
        result.add_check("zero_fraction nondecreasing", monotone, detail=str(fractions))
        return result


class AnnihilationSuite(BasePropertySuite):
    """kappa above max|r| at u = 0 gives the zero control."""

    name = "annihilation"

    def run(self, context: SuiteContext) -> SuiteResult:
        result = SuiteResult(self.name)
        problem = context.problem
        threshold = context.threshold()
        if threshold <= KAPPA_ZERO:
            result.skip("annihilation", f"max|r| at u=0 is {threshold:.3e}")
            return result
        kappa = 1.1 * threshold
        large = problem.with_weights(kappa=kappa)
        report = minimize(large, context.optimizer, large.zero_control())
        largest = float(np.max(np.abs(report.control)))
        result.add_check("control vanishes", largest <= context.optimizer.tol_u, metric=largest, threshold=context.optimizer.tol_u)
        result.add_check("fixed point at zero", report.stationarity <= context.optimizer.stat_tol, metric=report.stationarity)
        bound = float(np.max(np.abs(report.adjoint.gradient_part)))
        result.add_check("|r| <= kappa", bound <= kappa, metric=bound, threshold=kappa)
        return result


class SecondOrderSuite(BasePropertySuite):
    """Positive sampled critical-cone curvature and quadratic growth at the optimum."""

    name = "second_order"

    def run(self, context: SuiteContext) -> SuiteResult:
        result = SuiteResult(self.name)
        optimum = context.optimum()
        result.add_check("optimizer converged", optimum.converged, metric=optimum.stationarity)
        report = second_order_check(
            optimum.control,
            context.problem,
            n_dirs=context.second_order.n_dirs,
            seed=context.seed,
            cfg=context.second_order,
            optimizer_cfg=context.optimizer,
            oracle_cfg=context.oracle,
        )
        if report.min_curvature is None:
            result.skip("curvature", "critical-cone surrogate empty")
        else:
            result.add_check("min curvature positive", report.min_curvature > 0.0, metric=report.min_curvature, seed=context.seed)
        if report.max_fd_error is not None:
            result.add_check(
                "curvature vs FD", report.max_fd_error <= context.oracle.hessian_tol,
                metric=report.max_fd_error, threshold=context.oracle.hessian_tol,
            )
        if report.growth:
            worst = min(p.increase for p in report.growth)
            result.add_check("quadratic growth samples", report.growth_passed, metric=worst, threshold=-context.second_order.growth_atol)
        return result


DEFAULT_SUITES: tuple[type[BasePropertySuite], ...] = (
    PotentialSuite,
    ConservationSuite,
    SeparationSuite,
    LinearizedSuite,
    BilinearizedSuite,
    AdjointSuite,
    HessianSuite,
    SparsitySuite,
    AnnihilationSuite,
    SecondOrderSuite,
)


class SuiteEngine:
    """Runs property suites, optionally on a thread pool."""

    def __init__(self, suites: list[BasePropertySuite], n_workers: int = 1) -> None:
        self.suites = suites
        self.n_workers = n_workers

    def _run_one(self, suite: BasePropertySuite, context: SuiteContext) -> SuiteResult:
        try:
            result = suite.run(context)
        except Exception as exc:  # a crashing suite is a failed suite
            logger.exception("suite %s raised", suite.name)
            result = SuiteResult(suite.name)
            result.add_check("execution", False, detail=f"{type(exc).__name__}: {exc}", seed=context.seed)
        logger.info("suite %-14s %s", suite.name, result.status.upper())
        return result

    def run(self, context: SuiteContext) -> SuiteReport:
        if self.n_workers > 1:
            with ThreadPoolExecutor(max_workers=self.n_workers) as pool:
                results = list(pool.map(lambda suite: self._run_one(suite, context), self.suites))
        else:
            results = [self._run_one(suite, context) for suite in self.suites]
        return SuiteReport(results=results, seed=context.seed, mutated=context.mutate)


def run_property_suites(
    problem: ControlProblem,
    oracle: Optional[OracleConfig] = None,
    optimizer: Optional[OptimizerConfig] = None,
    second_order: Optional[SecondOrderConfig] = None,
    seed: int = 0,
    mutate: bool = False,
    suites: Optional[list[str]] = None,
    n_workers: int = 1,
) -> SuiteReport:
    """Run the selected (default: all) property suites and collect the report."""
    context = SuiteContext(
        problem,
        oracle or OracleConfig(),
        optimizer or OptimizerConfig(),
        second_order or SecondOrderConfig(),
        seed=seed,
        mutate=mutate,
    )
    selected = [cls() for cls in DEFAULT_SUITES if suites is None or cls.name in suites]
    if suites is not None:
        unknown = set(suites) - {suite.name for suite in selected}
        if unknown:
            raise ValueError(f"unknown suites: {sorted(unknown)}")
    return SuiteEngine(selected, n_workers=n_workers).run(context)
