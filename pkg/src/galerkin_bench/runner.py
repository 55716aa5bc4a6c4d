"""Run orchestration shared by the CLI subcommands.

Each function validates nothing itself (configs are validated on load) and
returns Result for expected failures, so the CLI only maps outcomes to exit
codes and files.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from galerkin_bench.config import (
    AmplitudeScalingGrid,
    CheckName,
    DEFAULT_NORM_GROWTH_ORDERS,
    CoefficientState,
    ControlSpec,
    ExperimentConfig,
    FileControl,
    SweepConfig,
    SystemFileSpec,
    TableControl,
    Tolerances,
    TransferControl,
    ZeroControl,
)
from galerkin_bench.effects import IO, Effect, ErrorDetails, Failure, Result, Success
from galerkin_bench.models import (
    DiagnosticReport,
    PiecewiseConstantControl,
    SpectralSystem,
    Trajectory,
    TruncationReport,
)
from galerkin_bench.services import diagnostics, galerkin, synth
from galerkin_bench.services.propagator import GalerkinPropagator, embed_state
from galerkin_bench.storage import (
    ControlRepository,
    TableRepository,
    TrajectoryCsvRepository,
    create_artifact_repositories,
    run_all,
)
from galerkin_bench.systems import load_spectral_data, system_from_name

logger = logging.getLogger(__name__)

DEFAULT_AUTO_CAP = 1024
SCALING_COLUMNS = ["n", "amplitude", "horizon", "fidelity", "l1_norm"]
TRUNCATION_COLUMNS = ["order", "reference_order", "error"]


@dataclass(frozen=True)
class ResolvedControl:
    """A control ready to propagate, plus the design it came from."""

    control: PiecewiseConstantControl
    design: Optional[dict[str, Any]] = None
    target_level: Optional[int] = None
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class RunOutcome:
    """Everything a simulate run produces."""

    system: SpectralSystem
    trajectory: Trajectory
    reports: tuple[DiagnosticReport, ...]
    summary: dict[str, Any]
    resolved: ResolvedControl
    truncation: Optional[TruncationReport] = None

    @property
    def exit_code(self) -> int:
        """0 when every non-skipped check passed, else 1."""
        return 0 if self.summary["checks"]["all_passed"] else 1


@dataclass(frozen=True)
class SweepOutcome:
    """Aggregated sweep table in grid order."""

    kind: str
    columns: list[str]
    rows: list[dict[str, Any]]
    extra: dict[str, Any] = field(default_factory=dict)


def resolve_system(spec: Union[str, SystemFileSpec]) -> Result[ErrorDetails, SpectralSystem]:
    """Registry name or spectral data file to a system."""
    if isinstance(spec, SystemFileSpec):
        return load_spectral_data(spec.file).run()
    try:
        return Success(system_from_name(spec))
    except ValueError as e:
        return Failure(ErrorDetails("CONFIG_INVALID", str(e), {"system": spec}))


def resolve_control(
    system: SpectralSystem, spec: ControlSpec, tolerances: Optional[Tolerances] = None
) -> Result[ErrorDetails, ResolvedControl]:
    """Turn a control spec into a piecewise constant control.

    Returns:
        Success with the control, or the design / storage Failure
    """
    tolerances = tolerances or Tolerances()
    if isinstance(spec, ZeroControl):
        if spec.horizon == 0:
            return Success(ResolvedControl(PiecewiseConstantControl.empty()))
        return Success(ResolvedControl(PiecewiseConstantControl.constant(0.0, spec.horizon)))
    if isinstance(spec, TableControl):
        return Success(ResolvedControl(PiecewiseConstantControl(tuple(spec.breakpoints), tuple(spec.values))))
    if isinstance(spec, FileControl):
        loaded = ControlRepository(spec.path.parent).load(spec.path).run()
        if isinstance(loaded, Failure):
            return Failure(loaded.error)
        return Success(ResolvedControl(loaded.value))
    if isinstance(spec, TransferControl):
        transfer = synth.design_transfer(
            system,
            spec.transition,
            spec.amplitude,
            spec.shape,
            phase=spec.phase,
            table=spec.table,
            steps_per_period=spec.steps_per_period,
            collision_tol=tolerances.collision,
        )
        if isinstance(transfer, Failure):
            return Failure(transfer.error)
        design = transfer.value
        return Success(ResolvedControl(design.control, design.to_dict(), spec.transition[1], design.warnings))
    ladder = synth.ladder_schedule(
        system, spec.top_level, spec.amplitude, spec.shape, steps_per_period=spec.steps_per_period
    )
    if isinstance(ladder, Failure):
        return Failure(ladder.error)
    schedule = ladder.value
    warnings = tuple(w for leg in schedule.legs for w in leg.warnings)
    return Success(ResolvedControl(schedule.control, schedule.to_dict(), spec.top_level, warnings))


def initial_coefficients(config: ExperimentConfig) -> np.ndarray:
    """Initial state as a coefficient vector over its own support."""
    state = config.initial_state
    if isinstance(state, CoefficientState):
        return np.asarray(state.as_complex(), dtype=complex)
    coefficients = np.zeros(state.level, dtype=complex)
    coefficients[-1] = 1.0
    return coefficients


def resolve_order(
    system: SpectralSystem, control: PiecewiseConstantControl, psi0: np.ndarray, config: ExperimentConfig
) -> Result[ErrorDetails, tuple[int, Optional[TruncationReport]]]:
    """Fixed order, or the empirical doubling search for ``auto``."""
    if config.truncation != "auto":
        return Success((int(config.truncation), None))
    cap = config.truncation_cap or DEFAULT_AUTO_CAP
    if system.max_level is not None:
        cap = min(cap, system.max_level)
    found = galerkin.empirical_truncation_order(
        system, control, psi0, config.tolerances.cauchy, cap, start=config.truncation_start
    )
    if isinstance(found, Failure):
        return Failure(found.error)
    return Success((found.value.order, found.value))


def run_checks(
    trajectory: Trajectory,
    system: SpectralSystem,
    checks: list[CheckName],
    norm_growth_orders: Sequence[int],
    tolerances: Tolerances,
) -> list[DiagnosticReport]:
    """Run the requested trajectory checks in a fixed order."""
    reports: list[DiagnosticReport] = []
    guard = tolerances.guard_edge_population
    if CheckName.NORM_GROWTH in checks:
        for k in norm_growth_orders:
            reports.append(
                diagnostics.check_norm_growth(trajectory, system, k, guard=guard, tolerance=tolerances.inequality)
            )
    if CheckName.L1_LOWER_BOUND in checks:
        reports.append(diagnostics.check_l1_lower_bound(trajectory, system, margin=tolerances.l1_margin, guard=guard))
    if CheckName.ENERGY_VARIATION in checks:
        energy = diagnostics.check_energy_variation(trajectory, system, guard=guard, tolerance=tolerances.inequality)
        if isinstance(energy, Failure):
            reports.append(
                DiagnosticReport.skipped(
                    "energy_variation", system.name, {"order": trajectory.order}, "B unbounded", {"code": energy.error.code}
                )
            )
        else:
            reports.append(energy.value)
    return reports


def simulate(config: ExperimentConfig) -> Result[ErrorDetails, RunOutcome]:
    """Resolve system, control and order, propagate, then check.

    Returns:
        Success with the run outcome, or the first Failure on the way
    """
    system_result = resolve_system(config.system)
    if isinstance(system_result, Failure):
        return Failure(system_result.error)
    system = system_result.value
    resolved = resolve_control(system, config.control, config.tolerances)
    if isinstance(resolved, Failure):
        return Failure(resolved.error)
    coefficients = initial_coefficients(config)
    order_result = resolve_order(system, resolved.value.control, coefficients, config)
    if isinstance(order_result, Failure):
        return Failure(order_result.error)
    order, truncation = order_result.value

    logger.info(f"Simulating - system: {system.name}, order: {order}, control: {config.control.kind}")
    try:
        propagator = GalerkinPropagator(galerkin.compress(system, order))
        trajectory = propagator.propagate(resolved.value.control, embed_state(coefficients, order), config.sample_dt)
    except ValueError as e:
        return Failure(ErrorDetails("CONFIG_INVALID", str(e), {"system": system.name, "order": order}))
    reports = run_checks(trajectory, system, config.checks, config.norm_growth_orders, config.tolerances)
    summary = run_summary(config, system, trajectory, reports, resolved.value, truncation)
    return Success(RunOutcome(system, trajectory, tuple(reports), summary, resolved.value, truncation))


def run_summary(
    config: ExperimentConfig,
    system: SpectralSystem,
    trajectory: Trajectory,
    reports: list[DiagnosticReport],
    resolved: ResolvedControl,
    truncation: Optional[TruncationReport],
) -> dict[str, Any]:
    """Summary document of one run."""
    populations = trajectory.populations()[-1]
    summary: dict[str, Any] = {
        "system": system.name,
        "order": trajectory.order,
        "control_kind": config.control.kind,
        "horizon": float(trajectory.times[-1]),
        "control_l1": trajectory.control_l1,
        "terminal_populations": [float(p) for p in populations],
        "max_norm_deviation": trajectory.max_norm_deviation(),
        "edge_population": trajectory.edge_population(),
        "checks": diagnostics.summarize_reports(reports),
        "warnings": list(resolved.warnings),
        "settings": {
            "checks": [c.value for c in config.checks],
            "norm_growth_orders": list(config.norm_growth_orders),
        },
    }
    if resolved.target_level is not None and resolved.target_level <= trajectory.order:
        summary["target_level"] = resolved.target_level
        summary["target_population"] = float(populations[resolved.target_level - 1])
    if resolved.design is not None:
        summary["design"] = resolved.design
    if truncation is not None:
        summary["truncation"] = truncation.to_dict()
    return summary


def write_run(outcome: RunOutcome, directory: str | Path) -> IO[Result[ErrorDetails, list[Path]]]:
    """Write control, trajectory (JSON and CSV), reports and summary."""
    repos = create_artifact_repositories(directory)

    def _write() -> Result[ErrorDetails, list[Path]]:
        return run_all(
            [
                repos.controls.save(outcome.trajectory.control),
                repos.trajectories.save(outcome.trajectory),
                repos.trajectory_csv.save(TrajectoryCsvRepository.rows_for(outcome.trajectory)),
                repos.reports.save(list(outcome.reports)),
                repos.summaries.save(outcome.summary),
            ]
        )

    return Effect(_write)


def recheck_trajectory(
    trajectory: Trajectory,
    system: SpectralSystem,
    checks: list[CheckName],
    tolerances: Tolerances,
    norm_growth_orders: Sequence[int] = DEFAULT_NORM_GROWTH_ORDERS,
) -> list[DiagnosticReport]:
    """Run checks on a stored trajectory."""
    return run_checks(trajectory, system, checks, norm_growth_orders, tolerances)


def recorded_norm_growth_orders(directory: str | Path) -> IO[Result[ErrorDetails, list[int]]]:
    """Norm growth orders a stored run was checked with.

    Runs without a summary (a bare trajectory file) use the default orders.
    """
    summaries = create_artifact_repositories(directory).summaries

    def _orders(loaded: Result[ErrorDetails, dict[str, Any]]) -> Result[ErrorDetails, list[int]]:
        if isinstance(loaded, Failure):
            if loaded.error.code == "FILE_NOT_FOUND":
                return Success(list(DEFAULT_NORM_GROWTH_ORDERS))
            return Failure(loaded.error)
        orders = loaded.value.get("settings", {}).get("norm_growth_orders", list(DEFAULT_NORM_GROWTH_ORDERS))
        if not isinstance(orders, list) or not all(isinstance(k, int) and k >= 1 for k in orders):
            message = "Recorded norm_growth_orders must be positive integers"
            return Failure(ErrorDetails("SCHEMA_MISMATCH", message, {"orders": orders}))
        return Success(orders)

    return summaries.load().map(_orders)


def spectrum_table(system: SpectralSystem, order: int) -> tuple[list[dict[str, Any]], list[str]]:
    """Eigenvalues, gaps and coupling band profile, plus any invariant violations.

    Returns:
        Rows (one per level) and a list of violation messages
    """
    compression = galerkin.compress(system, order)
    lam = system.eigenvalues(order)
    block = compression.coupling
    rows = []
    for k in range(1, order + 1):
        coupled = np.flatnonzero(np.abs(block[k - 1]) > 0) + 1
        rows.append(
            {
                "k": k,
                "lambda": float(lam[k - 1]),
                "gap": float(abs(lam[k] - lam[k - 1])) if k < order else None,
                "coupled": int(coupled.size),
                "band": int(np.max(np.abs(coupled - k))) if coupled.size else 0,
            }
        )
    violations = []
    defect = float(np.max(np.abs(block + block.conj().T))) if order else 0.0
    if defect > 1e-12:
        violations.append(f"coupling is not skew-Hermitian (defect {defect:.3e})")
    equal = np.abs(lam[:, None] - lam[None, :]) <= 1e-12
    np.fill_diagonal(equal, False)
    if np.any(np.abs(block[equal]) > 0):
        violations.append("coupled levels share an eigenvalue")
    return rows, violations


def diagnose_system(system: SpectralSystem, order: int, tolerances: Tolerances) -> dict[str, Any]:
    """Transition graph and non-degenerate chain summary up to a scan depth."""
    graph = diagnostics.transition_graph(system, order, tolerances.degeneracy, tolerances.coupling)
    chain = diagnostics.find_nondegenerate_chain(system, order, tolerances.degeneracy, tolerances.coupling)
    summary: dict[str, Any] = {
        "system": system.name,
        "order": order,
        "edges": len(graph.edges),
        "nondegenerate_edges": len(graph.nondegenerate_edges()),
        "degenerate_edges": [list(e.pair) for e in graph.degenerate_edges()],
        "coincidences": [{"gap": c.gap, "pairs": [list(p) for p in c.pairs]} for c in graph.coincidences],
    }
    if isinstance(chain, Failure):
        summary["chain"] = {"found": False, "component": chain.error.details.get("component", [])}
    else:
        summary["chain"] = {"found": True, "tree": [list(e) for e in chain.value.tree]}
    return summary


def sweep(config: SweepConfig, jobs: Optional[int] = None) -> Result[ErrorDetails, SweepOutcome]:
    """Fill the sweep table, cells in parallel up to ``jobs``.

    Truncation grids run one cell per order. An amplitude scaling grid is one
    experiment because every row shares the reference design.
    """
    system_result = resolve_system(config.system)
    if isinstance(system_result, Failure):
        return Failure(system_result.error)
    system = system_result.value
    grid = config.grid
    workers = jobs or config.jobs

    if isinstance(grid, AmplitudeScalingGrid):
        if not grid.n_list:
            return Success(SweepOutcome(grid.kind, SCALING_COLUMNS, [], {"monotone": True}))
        experiment = synth.amplitude_scaling_experiment(
            system,
            grid.transition,
            grid.shape,
            grid.n_list,
            grid.base_amplitude,
            int(config.truncation),
            steps_per_period=grid.steps_per_period,
        )
        if isinstance(experiment, Failure):
            return Failure(experiment.error)
        value = experiment.value
        rows = [row.to_dict() for row in value.rows]
        return Success(SweepOutcome(grid.kind, SCALING_COLUMNS, rows, {"monotone": value.monotone}))

    if not grid.orders:
        return Success(SweepOutcome(grid.kind, TRUNCATION_COLUMNS, []))
    resolved = resolve_control(system, config.control, config.tolerances)
    if isinstance(resolved, Failure):
        return Failure(resolved.error)
    control = resolved.value.control
    psi0 = initial_coefficients(config)

    def cell(order: int) -> dict[str, Any]:
        (row,) = galerkin.truncation_sweep(system, control, psi0, [order])
        return row.to_dict()

    logger.info(f"Running sweep - system: {system.name}, cells: {len(grid.orders)}, jobs: {workers}")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(cell, grid.orders))
    errors = [row["error"] for row in rows]
    monotone = all(b <= a for a, b in zip(errors, errors[1:]))
    return Success(SweepOutcome(grid.kind, TRUNCATION_COLUMNS, rows, {"monotone": monotone}))


def write_sweep(outcome: SweepOutcome, directory: str | Path) -> IO[Result[ErrorDetails, Path]]:
    """Write the aggregated table to ``sweep.csv``."""
    return TableRepository(directory, columns=outcome.columns).save(outcome.rows)
