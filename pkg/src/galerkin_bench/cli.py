"""Command-line front end.

Exit codes: 0 when every non-skipped check passes, 1 on a check failure or a
domain failure (no transfer, truncation cap exceeded), 2 on validation,
configuration or file errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from galerkin_bench.config import (
    CheckName,
    ExperimentConfig,
    LadderControl,
    SweepConfig,
    SystemFileSpec,
    Tolerances,
    TransferControl,
    load_config,
    parse_config,
)
from galerkin_bench.effects import ErrorDetails, Failure, Result, Success
from galerkin_bench.models import SpectralSystem, Waveform
from galerkin_bench.runner import (
    diagnose_system,
    recheck_trajectory,
    recorded_norm_growth_orders,
    resolve_control,
    resolve_system,
    simulate,
    spectrum_table,
    sweep,
    write_run,
    write_sweep,
)
from galerkin_bench.services import basis_state, empirical_truncation_order, harmonic_truncation_order, summarize_reports
from galerkin_bench.services.synth import DEFAULT_STEPS_PER_PERIOD
from galerkin_bench.storage import ControlRepository, TrajectoryRepository, create_artifact_repositories, run_all

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s"
INPUT_ERRORS = frozenset({"CONFIG_INVALID", "FILE_NOT_FOUND", "STORAGE_ERROR", "SCHEMA_MISMATCH"})

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2


def exit_code_for(error: ErrorDetails) -> int:
    """Map a Failure to the exit-code contract."""
    return EXIT_INVALID if error.code in INPUT_ERRORS else EXIT_CHECK_FAILED


def _fail(error: ErrorDetails) -> int:
    print(f"error: {error}", file=sys.stderr)
    return exit_code_for(error)


def _print_json(data: Any) -> None:
    print(json.dumps(data, indent=2, sort_keys=True))


def _add_system_arguments(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--system", help="System name: square-well, harmonic, planar-rotor, anharmonic(alpha=A)")
    group.add_argument("--data", type=Path, help="Spectral data YAML file")


def _add_tolerance_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--guard-edge-pop", type=float, help="Truncation-edge population guard")
    parser.add_argument("--tol-degeneracy", type=float, help="Relative degeneracy tolerance")
    parser.add_argument("--tol-cauchy", type=float, help="N versus 2N terminal distance target")
    parser.add_argument("--tol-collision", type=float, help="Relative harmonic collision tolerance")


def _tolerance_overrides(args: argparse.Namespace) -> dict[str, float]:
    names = {
        "guard_edge_pop": "guard_edge_population",
        "tol_degeneracy": "degeneracy",
        "tol_cauchy": "cauchy",
        "tol_collision": "collision",
    }
    return {field: getattr(args, flag) for flag, field in names.items() if getattr(args, flag, None) is not None}


def _tolerances(args: argparse.Namespace) -> Tolerances:
    return Tolerances(**_tolerance_overrides(args))


def _system(args: argparse.Namespace) -> Result[ErrorDetails, SpectralSystem]:
    if args.data is not None:
        return resolve_system(SystemFileSpec(file=args.data))
    return resolve_system(args.system)


def _read_config(args: argparse.Namespace, model: type[ExperimentConfig]) -> Result[ErrorDetails, ExperimentConfig]:
    """Load a config file and apply command-line overrides, validating again."""
    loaded = load_config(args.config, model).run()
    if isinstance(loaded, Failure):
        return loaded
    overrides: dict[str, Any] = {}
    if args.out is not None:
        overrides["output_dir"] = str(args.out)
    if getattr(args, "jobs", None) is not None:
        overrides["jobs"] = args.jobs
    tolerance_overrides = _tolerance_overrides(args)
    if not overrides and not tolerance_overrides:
        return loaded
    data = loaded.value.model_dump(mode="json")
    data.update(overrides)
    data["tolerances"] = {**data["tolerances"], **tolerance_overrides}
    return parse_config(data, model)


def cmd_spectrum(args: argparse.Namespace) -> int:
    """Print λ_k, gaps and the coupling band profile as CSV."""
    system = _system(args)
    if isinstance(system, Failure):
        return _fail(system.error)
    rows, violations = spectrum_table(system.value, args.n)
    writer = csv.DictWriter(sys.stdout, fieldnames=["k", "lambda", "gap", "coupled", "band"], lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({**row, "gap": "" if row["gap"] is None else row["gap"]})
    for message in violations:
        print(f"violation: {message}", file=sys.stderr)
    return EXIT_CHECK_FAILED if violations else EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    """Run one experiment and write its artifacts."""
    config = _read_config(args, ExperimentConfig)
    if isinstance(config, Failure):
        return _fail(config.error)
    outcome = simulate(config.value)
    if isinstance(outcome, Failure):
        return _fail(outcome.error)
    written = write_run(outcome.value, config.value.output_dir).run()
    if isinstance(written, Failure):
        return _fail(written.error)
    _print_json(outcome.value.summary)
    return outcome.value.exit_code


def cmd_synthesize(args: argparse.Namespace) -> int:
    """Design a transfer or a ladder and write the control plus a design summary."""
    system = _system(args)
    if isinstance(system, Failure):
        return _fail(system.error)
    shape = Waveform(args.shape)
    if args.ladder is not None:
        spec: TransferControl | LadderControl = LadderControl(
            top_level=args.ladder, amplitude=args.amplitude, shape=shape, steps_per_period=args.steps_per_period
        )
    else:
        spec = TransferControl(
            transition=(args.transition[0], args.transition[1]),
            amplitude=args.amplitude,
            shape=shape,
            phase=args.phase,
            steps_per_period=args.steps_per_period,
        )
    resolved = resolve_control(system.value, spec, _tolerances(args))
    if isinstance(resolved, Failure):
        return _fail(resolved.error)
    repos = create_artifact_repositories(args.out)
    design = {"system": system.value.name, "control_kind": spec.kind, **(resolved.value.design or {})}
    written = run_all([repos.controls.save(resolved.value.control), repos.designs.save(design)])
    if isinstance(written, Failure):
        return _fail(written.error)
    _print_json(design)
    return EXIT_OK


def cmd_galerkin_order(args: argparse.Namespace) -> int:
    """Truncation order from the harmonic formula or from a doubling run."""
    if args.empirical is None:
        found = harmonic_truncation_order(args.K, args.eps)
        if isinstance(found, Failure):
            return _fail(found.error)
        print(found.value)
        return EXIT_OK

    system = resolve_system(args.empirical)
    if isinstance(system, Failure):
        return _fail(system.error)
    if args.control is None:
        return _fail(ErrorDetails("CONFIG_INVALID", "--empirical needs --control FILE"))
    control = ControlRepository(args.control.parent).load(args.control).run()
    if isinstance(control, Failure):
        return _fail(control.error)
    psi0 = basis_state(args.initial_level, args.initial_level)
    try:
        report = empirical_truncation_order(system.value, control.value, psi0, args.eps, args.cap, start=args.start)
    except ValueError as e:
        return _fail(ErrorDetails("CONFIG_INVALID", str(e)))
    if isinstance(report, Failure):
        _print_json(report.error.to_dict())
        return exit_code_for(report.error)
    _print_json(report.value.to_dict())
    return EXIT_OK


def cmd_diagnose(args: argparse.Namespace) -> int:
    """Transition graph and chain summary; with --trajectory, re-run the trajectory checks."""
    tolerances = _tolerances(args)
    if args.trajectory is None:
        system = _system(args)
        if isinstance(system, Failure):
            return _fail(system.error)
        if args.n < 2:
            return _fail(ErrorDetails("CONFIG_INVALID", "Scan depth --n must be at least 2"))
        _print_json(diagnose_system(system.value, args.n, tolerances))
        return EXIT_OK

    trajectory = TrajectoryRepository(args.trajectory.parent).load(args.trajectory).run()
    if isinstance(trajectory, Failure):
        return _fail(trajectory.error)
    if args.system is None and args.data is None:
        system = resolve_system(trajectory.value.system_name)
    else:
        system = _system(args)
    if isinstance(system, Failure):
        return _fail(system.error)
    orders = recorded_norm_growth_orders(args.trajectory.parent).run()
    if isinstance(orders, Failure):
        return _fail(orders.error)
    checks = [CheckName(c) for c in args.checks] if args.checks else list(CheckName)
    reports = recheck_trajectory(trajectory.value, system.value, checks, tolerances, orders.value)
    for report in reports:
        print(report.to_json_line())
    return EXIT_OK if summarize_reports(reports)["all_passed"] else EXIT_CHECK_FAILED


def cmd_sweep(args: argparse.Namespace) -> int:
    """Run a parameter grid and write ``sweep.csv``."""
    config = _read_config(args, SweepConfig)
    if isinstance(config, Failure):
        return _fail(config.error)
    assert isinstance(config.value, SweepConfig)
    outcome = sweep(config.value)
    if isinstance(outcome, Failure):
        return _fail(outcome.error)
    written = write_sweep(outcome.value, config.value.output_dir).run()
    if isinstance(written, Failure):
        return _fail(written.error)
    _print_json({"kind": outcome.value.kind, "rows": len(outcome.value.rows), **outcome.value.extra})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation."""
    parser = argparse.ArgumentParser(prog="galerkin-bench", description=__doc__.splitlines()[0])
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    spectrum = sub.add_parser("spectrum", help="Eigenvalues, gaps and coupling band profile")
    spectrum.add_argument("system", nargs="?", help="System name")
    spectrum.add_argument("--data", type=Path, help="Spectral data YAML file")
    spectrum.add_argument("--n", type=int, default=10, help="Number of levels")
    spectrum.set_defaults(handler=cmd_spectrum)

    simulate_cmd = sub.add_parser("simulate", help="Run one experiment config")
    simulate_cmd.add_argument("config", type=Path)
    simulate_cmd.add_argument("--out", type=Path, help="Output directory (overrides the config)")
    _add_tolerance_arguments(simulate_cmd)
    simulate_cmd.set_defaults(handler=cmd_simulate)

    synthesize = sub.add_parser("synthesize", help="Design a resonant transfer or ladder")
    _add_system_arguments(synthesize)
    synthesize.add_argument("--transition", type=int, nargs=2, default=[1, 2], metavar=("J", "K"))
    synthesize.add_argument("--ladder", type=int, metavar="M", help="Climb (1,2), ..., (M-1,M) instead")
    synthesize.add_argument("--amplitude", type=float, required=True)
    synthesize.add_argument("--shape", choices=[w.value for w in Waveform if w is not Waveform.TABULATED], default="cosine")
    synthesize.add_argument("--phase", type=float, default=0.0)
    synthesize.add_argument("--steps-per-period", type=int, default=DEFAULT_STEPS_PER_PERIOD)
    synthesize.add_argument("--out", type=Path, default=Path("."))
    _add_tolerance_arguments(synthesize)
    synthesize.set_defaults(handler=cmd_synthesize)

    order = sub.add_parser("galerkin-order", help="Truncation order for an L1 budget")
    order.add_argument("--formula", choices=["harmonic"], default="harmonic")
    order.add_argument("--empirical", metavar="SYSTEM", help="Doubling run on this system instead of the formula")
    order.add_argument("-K", type=float, default=1.0, help="L1 budget for the formula")
    order.add_argument("--eps", type=float, default=1e-4)
    order.add_argument("--control", type=Path, help="Control JSON for --empirical")
    order.add_argument("--cap", type=int, default=1024)
    order.add_argument("--start", type=int, default=None)
    order.add_argument("--initial-level", type=int, default=1)
    order.set_defaults(handler=cmd_galerkin_order)

    diagnose = sub.add_parser("diagnose", help="Transition structure, or checks on a stored trajectory")
    _add_system_arguments(diagnose, required=False)
    diagnose.add_argument("--n", type=int, default=10, help="Scan depth")
    diagnose.add_argument("--trajectory", type=Path, help="trajectory.json to re-check")
    diagnose.add_argument("--checks", nargs="*", choices=[c.value for c in CheckName])
    _add_tolerance_arguments(diagnose)
    diagnose.set_defaults(handler=cmd_diagnose)

    sweep_cmd = sub.add_parser("sweep", help="Run a parameter grid")
    sweep_cmd.add_argument("config", type=Path)
    sweep_cmd.add_argument("--out", type=Path, help="Output directory (overrides the config)")
    sweep_cmd.add_argument("--jobs", type=int, help="Concurrent grid cells")
    _add_tolerance_arguments(sweep_cmd)
    sweep_cmd.set_defaults(handler=cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point for the ``galerkin-bench`` script."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT, stream=sys.stderr)
    if args.command == "spectrum":
        if (args.system is None) == (args.data is None):
            parser.error("spectrum needs exactly one of SYSTEM or --data")
        if args.n < 1:
            parser.error("--n must be at least 1")
    if args.command == "diagnose" and args.trajectory is None and args.system is None and args.data is None:
        parser.error("diagnose needs --system, --data or --trajectory")
    try:
        return int(args.handler(args))
    except ValueError as e:
        logger.error(f"Invalid input - command: {args.command}, error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
