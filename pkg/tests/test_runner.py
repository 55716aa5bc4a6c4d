"""Tests for run orchestration."""

import json
from pathlib import Path
from typing import Any

import pytest

from galerkin_bench.config import (
    CheckName,
    ExperimentConfig,
    FileControl,
    LadderControl,
    SweepConfig,
    SystemFileSpec,
    Tolerances,
)
from galerkin_bench.effects import Failure, Success
from galerkin_bench.models import PiecewiseConstantControl, SpectralSystem, Verdict
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
from galerkin_bench.storage import ControlRepository, DocumentRepository, ReportRepository, TrajectoryRepository


def experiment(**fields: Any) -> ExperimentConfig:
    """Validated experiment config."""
    return ExperimentConfig.model_validate(fields)


# Tests for simulate
def test_rotor_transfer_run(output_dir: Path) -> None:
    """Test a designed transfer reaching its target with every check passing."""
    config = experiment(
        system="planar-rotor",
        truncation=12,
        control={"kind": "transfer", "transition": [1, 2], "amplitude": 0.02},
        checks=["norm_growth", "l1_lower_bound", "energy_variation"],
    )
    result = simulate(config)
    assert isinstance(result, Success)
    outcome = result.value
    assert outcome.exit_code == 0
    assert outcome.summary["target_level"] == 2
    assert outcome.summary["target_population"] >= 0.99
    assert outcome.summary["design"]["pulse"]["transition"] == [1, 2]
    assert [r.check for r in outcome.reports] == ["norm_growth", "norm_growth", "l1_lower_bound", "energy_variation"]

    written = write_run(outcome, output_dir).run()
    assert isinstance(written, Success)
    names = sorted(p.name for p in written.value)
    assert names == ["control.json", "reports.jsonl", "summary.json", "trajectory.csv", "trajectory.json"]
    summary = json.loads((output_dir / "summary.json").read_text(encoding="utf-8"))
    assert summary["kind"] == "summary"
    assert summary["checks"]["all_passed"]


def test_unbounded_coupling_skips_energy_check() -> None:
    """Test that energy variation on the oscillator becomes a SKIPPED report."""
    config = experiment(
        system="harmonic",
        truncation=10,
        control={"kind": "zero", "horizon": 1.0},
        checks=["energy_variation"],
    )
    result = simulate(config)
    assert isinstance(result, Success)
    (report,) = result.value.reports
    assert report.verdict is Verdict.SKIPPED
    assert report.reason == "B unbounded"
    assert result.value.exit_code == 0


def test_auto_truncation() -> None:
    """Test that 'auto' runs the doubling search from the configured start."""
    config = experiment(
        system="planar-rotor",
        truncation="auto",
        truncation_start=4,
        control={"kind": "zero", "horizon": 1.0},
    )
    result = simulate(config)
    assert isinstance(result, Success)
    assert result.value.trajectory.order == 4
    assert result.value.summary["truncation"]["order"] == 4


def test_auto_truncation_cap_exceeded() -> None:
    """Test TRUNCATION_CAP_EXCEEDED from a tight target and a small cap."""
    config = experiment(
        system="square-well",
        truncation="auto",
        truncation_cap=16,
        control={"kind": "table", "breakpoints": [0, 1, 2, 4], "values": [1.0, -1.0, 0.5]},
        tolerances={"cauchy": 1e-15},
    )
    result = simulate(config)
    assert isinstance(result, Failure)
    assert result.error.code == "TRUNCATION_CAP_EXCEEDED"


def test_uncoupled_transfer() -> None:
    """Test that NO_TRANSFER surfaces from simulate."""
    config = experiment(
        system="square-well", truncation=8, control={"kind": "transfer", "transition": [1, 3], "amplitude": 0.01}
    )
    result = simulate(config)
    assert isinstance(result, Failure)
    assert result.error.code == "NO_TRANSFER"


def test_coefficient_initial_state() -> None:
    """Test a superposition padded to the truncation order."""
    half = 0.5**0.5
    config = experiment(
        system="planar-rotor",
        truncation=6,
        initial_state={"coefficients": [[half, 0.0], [0.0, half]]},
        control={"kind": "zero", "horizon": 0.5},
    )
    result = simulate(config)
    assert isinstance(result, Success)
    assert result.value.summary["terminal_populations"][:2] == pytest.approx([0.5, 0.5])


# Tests for control and system resolution
def test_file_control(output_dir: Path, rotor: SpectralSystem, staircase_control: PiecewiseConstantControl) -> None:
    """Test a control read back from a control artifact."""
    ControlRepository(output_dir).save(staircase_control).run()
    result = resolve_control(rotor, FileControl(path=output_dir / "control.json"))
    assert isinstance(result, Success)
    assert result.value.control == staircase_control


def test_missing_control_file(output_dir: Path, rotor: SpectralSystem) -> None:
    """Test FILE_NOT_FOUND for a missing control artifact."""
    result = resolve_control(rotor, FileControl(path=output_dir / "missing.json"))
    assert isinstance(result, Failure)
    assert result.error.code == "FILE_NOT_FOUND"


def test_resolve_system_from_file(tmp_path: Path) -> None:
    """Test a system given by a spectral data file."""
    path = tmp_path / "two-level.yaml"
    path.write_text("name: two-level\neigenvalues: [-1.0, -3.0]\ncouplings: [[1, 2, 0.0, -0.5]]\n", encoding="utf-8")
    result = resolve_system(SystemFileSpec(file=path))
    assert isinstance(result, Success)
    assert result.value.max_level == 2


def test_ladder_control(rotor: SpectralSystem) -> None:
    """Test a resolved ladder with its target level."""
    result = resolve_control(rotor, LadderControl(top_level=3, amplitude=0.05))
    assert isinstance(result, Success)
    assert result.value.target_level == 3
    assert result.value.design is not None
    assert len(result.value.design["legs"]) == 2


# Tests for structural summaries
def test_spectrum_table(rotor: SpectralSystem) -> None:
    """Test the eigenvalue and band profile rows."""
    rows, violations = spectrum_table(rotor, 4)
    assert violations == []
    assert [row["lambda"] for row in rows] == [-1.0, -4.0, -9.0, -16.0]
    assert [row["gap"] for row in rows] == [3.0, 5.0, 7.0, None]
    assert [row["band"] for row in rows] == [1, 1, 1, 1]


def test_diagnose_system(harmonic: SpectralSystem, rotor: SpectralSystem) -> None:
    """Test the chain summaries of the oscillator and the rotor."""
    oscillator = diagnose_system(harmonic, 10, Tolerances())
    assert oscillator["nondegenerate_edges"] == 0
    assert oscillator["chain"] == {"found": False, "component": [1]}
    ladder = diagnose_system(rotor, 5, Tolerances())
    assert ladder["chain"]["found"]
    assert ladder["chain"]["tree"] == [[1, 2], [2, 3], [3, 4], [4, 5]]


# Tests for sweeps
def test_truncation_sweep(output_dir: Path) -> None:
    """Test a truncation grid run in parallel, rows in grid order."""
    config = SweepConfig.model_validate(
        {
            "system": "planar-rotor",
            "truncation": 4,
            "control": {"kind": "table", "breakpoints": [0, 1, 2, 4], "values": [1.0, -1.0, 0.5]},
            "grid": {"kind": "truncation", "orders": [8, 4, 16]},
            "jobs": 3,
        }
    )
    result = sweep(config)
    assert isinstance(result, Success)
    outcome = result.value
    assert [row["order"] for row in outcome.rows] == [8, 4, 16]
    assert [row["reference_order"] for row in outcome.rows] == [16, 8, 32]
    write_sweep(outcome, output_dir).run()
    header = (output_dir / "sweep.csv").read_text(encoding="utf-8").splitlines()[0]
    assert header == "order,reference_order,error"


def test_amplitude_scaling_sweep(output_dir: Path) -> None:
    """Test that an amplitude scaling grid gives one row per n."""
    config = SweepConfig.model_validate(
        {
            "system": "planar-rotor",
            "truncation": 8,
            "grid": {"kind": "amplitude_scaling", "base_amplitude": 0.04, "n_list": [1, 2]},
        }
    )
    result = sweep(config)
    assert isinstance(result, Success)
    assert [row["n"] for row in result.value.rows] == [1, 2]
    assert result.value.rows[1]["amplitude"] == pytest.approx(0.02)
    assert "monotone" in result.value.extra
    write_sweep(result.value, output_dir).run()
    header = (output_dir / "sweep.csv").read_text(encoding="utf-8").splitlines()[0]
    assert header == "n,amplitude,horizon,fidelity,l1_norm"


def test_empty_grid() -> None:
    """Test that an empty grid gives an empty table."""
    config = SweepConfig.model_validate(
        {"system": "planar-rotor", "truncation": 4, "grid": {"kind": "truncation", "orders": []}}
    )
    result = sweep(config)
    assert isinstance(result, Success)
    assert result.value.rows == []


# Tests for reproducible artifacts
RUN_FILES = ["control.json", "reports.jsonl", "summary.json", "trajectory.csv", "trajectory.json"]


def staircase_run(**fields: Any) -> ExperimentConfig:
    """Rotor run under the staircase control with every check."""
    return experiment(
        system="planar-rotor",
        truncation=8,
        control={"kind": "table", "breakpoints": [0, 1, 2, 4], "values": [1.0, -1.0, 0.5]},
        checks=["norm_growth", "l1_lower_bound", "energy_variation"],
        sample_dt=0.25,
        **fields,
    )


def test_rerun_is_byte_identical(tmp_path: Path) -> None:
    """Test that the same config writes the same bytes twice."""
    for name in ("first", "second"):
        result = simulate(staircase_run())
        assert isinstance(result, Success)
        assert isinstance(write_run(result.value, tmp_path / name).run(), Success)
    for file_name in RUN_FILES:
        assert (tmp_path / "first" / file_name).read_bytes() == (tmp_path / "second" / file_name).read_bytes()


def test_stored_run_reproduces(tmp_path: Path) -> None:
    """Test replaying the stored control and re-checking the stored trajectory."""
    original = simulate(staircase_run())
    assert isinstance(original, Success)
    write_run(original.value, tmp_path / "original").run()

    stored_control = FileControl(path=tmp_path / "original" / "control.json")
    replay = simulate(staircase_run().model_copy(update={"control": stored_control}))
    assert isinstance(replay, Success)
    write_run(replay.value, tmp_path / "replay").run()
    for file_name in ["control.json", "reports.jsonl", "trajectory.json", "trajectory.csv"]:
        assert (tmp_path / "original" / file_name).read_bytes() == (tmp_path / "replay" / file_name).read_bytes()

    stored = TrajectoryRepository(tmp_path / "original").load().run()
    assert isinstance(stored, Success)
    config = staircase_run()
    reports = recheck_trajectory(stored.value, original.value.system, config.checks, config.tolerances)
    repository = ReportRepository(tmp_path / "original")
    assert repository.encode(reports) == (tmp_path / "original" / "reports.jsonl").read_text(encoding="utf-8")


def test_recorded_norm_growth_orders(output_dir: Path) -> None:
    """Test that a run records the orders its norm growth checks used."""
    result = simulate(staircase_run(norm_growth_orders=[3]))
    assert isinstance(result, Success)
    assert [r.parameters["k"] for r in result.value.reports if r.check == "norm_growth"] == [3]
    write_run(result.value, output_dir).run()
    summary = json.loads((output_dir / "summary.json").read_text(encoding="utf-8"))
    assert summary["settings"]["norm_growth_orders"] == [3]

    orders = recorded_norm_growth_orders(output_dir).run()
    assert isinstance(orders, Success)
    assert orders.value == [3]

    stored = TrajectoryRepository(output_dir).load().run()
    assert isinstance(stored, Success)
    reports = recheck_trajectory(stored.value, result.value.system, [CheckName.NORM_GROWTH], Tolerances(), orders.value)
    assert [r.parameters["k"] for r in reports] == [3]


def test_recorded_orders_without_summary(tmp_path: Path) -> None:
    """Test the default orders for a directory holding only a trajectory."""
    orders = recorded_norm_growth_orders(tmp_path).run()
    assert isinstance(orders, Success)
    assert orders.value == [1, 2]


def test_recorded_orders_malformed(output_dir: Path) -> None:
    """Test SCHEMA_MISMATCH for orders that are not positive integers."""
    DocumentRepository(output_dir, kind="summary", default_name="summary.json").save(
        {"settings": {"norm_growth_orders": [0, "two"]}}
    ).run()
    orders = recorded_norm_growth_orders(output_dir).run()
    assert isinstance(orders, Failure)
    assert orders.error.code == "SCHEMA_MISMATCH"
