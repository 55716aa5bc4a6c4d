"""Tests for the artifact repositories."""

import json
from pathlib import Path

import numpy as np
import pytest

from galerkin_bench.effects import Failure, Success
from galerkin_bench.models import DiagnosticReport, PiecewiseConstantControl, SpectralSystem, Verdict
from galerkin_bench.services import basis_state, check_l1_lower_bound, compress, propagate
from galerkin_bench.storage import (
    SCHEMA_VERSION,
    ControlRepository,
    TableRepository,
    TrajectoryCsvRepository,
    create_artifact_repositories,
    load_control_file,
    run_all,
    trajectory_columns,
)


# Tests for controls
def test_control_save_load(output_dir: Path, staircase_control: PiecewiseConstantControl) -> None:
    """Test that a saved control loads back equal."""
    repo = ControlRepository(output_dir)
    saved = repo.save(staircase_control).run()
    assert isinstance(saved, Success)
    assert saved.value == output_dir / "control.json"
    loaded = repo.load().run()
    assert isinstance(loaded, Success)
    assert loaded.value == staircase_control


def test_control_document_is_versioned(output_dir: Path, staircase_control: PiecewiseConstantControl) -> None:
    """Test the envelope fields and that no temporary file is left behind."""
    ControlRepository(output_dir).save(staircase_control).run()
    data = json.loads((output_dir / "control.json").read_text(encoding="utf-8"))
    assert data["schema_version"] == SCHEMA_VERSION
    assert data["kind"] == "control"
    assert data["values"] == [1.0, -1.0, 0.5]
    assert not (output_dir / "control.json.tmp").exists()


def test_load_control_file(output_dir: Path, staircase_control: PiecewiseConstantControl) -> None:
    """Test the direct reader used by the command line."""
    ControlRepository(output_dir).save(staircase_control, "u.json").run()
    assert load_control_file(output_dir / "u.json") == staircase_control


def test_save_is_lazy(output_dir: Path, staircase_control: PiecewiseConstantControl) -> None:
    """Test that nothing is written before run()."""
    effect = ControlRepository(output_dir / "nested").save(staircase_control)
    assert not (output_dir / "nested").exists()
    effect.run()
    assert (output_dir / "nested" / "control.json").exists()


def test_missing_file(output_dir: Path) -> None:
    """Test FILE_NOT_FOUND."""
    result = ControlRepository(output_dir).load().run()
    assert isinstance(result, Failure)
    assert result.error.code == "FILE_NOT_FOUND"


def test_schema_mismatch(output_dir: Path) -> None:
    """Test SCHEMA_MISMATCH for a document of another kind."""
    (output_dir / "control.json").write_text(
        json.dumps({"schema_version": SCHEMA_VERSION, "kind": "trajectory"}), encoding="utf-8"
    )
    result = ControlRepository(output_dir).load().run()
    assert isinstance(result, Failure)
    assert result.error.code == "SCHEMA_MISMATCH"


def test_unsupported_schema_version(output_dir: Path) -> None:
    """Test SCHEMA_MISMATCH for a future schema version."""
    (output_dir / "control.json").write_text(
        json.dumps({"schema_version": SCHEMA_VERSION + 1, "kind": "control", "breakpoints": [0.0], "values": []}),
        encoding="utf-8",
    )
    result = ControlRepository(output_dir).load().run()
    assert isinstance(result, Failure)
    assert result.error.code == "SCHEMA_MISMATCH"


def test_malformed_control(output_dir: Path) -> None:
    """Test STORAGE_ERROR for a control that fails validation."""
    (output_dir / "control.json").write_text(
        json.dumps({"schema_version": SCHEMA_VERSION, "kind": "control", "breakpoints": [0.0, 1.0, 0.5], "values": [1, 2]}),
        encoding="utf-8",
    )
    result = ControlRepository(output_dir).load().run()
    assert isinstance(result, Failure)
    assert result.error.code == "STORAGE_ERROR"
    assert "strictly increasing" in result.error.message


# Tests for trajectories and reports
def test_trajectory_save_load(
    output_dir: Path, rotor: SpectralSystem, staircase_control: PiecewiseConstantControl
) -> None:
    """Test that states, grid and bookkeeping survive a round trip exactly."""
    trajectory = propagate(compress(rotor, 5), staircase_control, basis_state(5, 1), sample_dt=0.5)
    repos = create_artifact_repositories(output_dir)
    repos.trajectories.save(trajectory).run()
    loaded = repos.trajectories.load().run()
    assert isinstance(loaded, Success)
    restored = loaded.value
    assert np.array_equal(restored.states, trajectory.states)
    assert np.array_equal(restored.times, trajectory.times)
    assert np.array_equal(restored.segment_index, trajectory.segment_index)
    assert restored.control == trajectory.control
    assert restored.system_name == "planar-rotor"


def test_trajectory_csv_columns(
    output_dir: Path, rotor: SpectralSystem, staircase_control: PiecewiseConstantControl
) -> None:
    """Test the t, re_k, im_k, pop_k layout."""
    trajectory = propagate(compress(rotor, 3), staircase_control, basis_state(3, 1))
    repo = TrajectoryCsvRepository(output_dir)
    repo.save(TrajectoryCsvRepository.rows_for(trajectory)).run()
    header = (output_dir / "trajectory.csv").read_text(encoding="utf-8").splitlines()[0]
    assert header.split(",") == trajectory_columns(3)
    assert trajectory_columns(2) == ["t", "re_1", "im_1", "re_2", "im_2", "pop_1", "pop_2"]
    rows = repo.load().run()
    assert isinstance(rows, Success)
    assert len(rows.value) == trajectory.times.size
    assert rows.value[-1]["t"] == pytest.approx(4.0)
    assert sum(rows.value[-1][f"pop_{k}"] for k in (1, 2, 3)) == pytest.approx(1.0)


def test_reports_as_json_lines(
    output_dir: Path, rotor: SpectralSystem, staircase_control: PiecewiseConstantControl
) -> None:
    """Test one sorted-key JSON object per line."""
    trajectory = propagate(compress(rotor, 4), staircase_control, basis_state(4, 1))
    reports = [
        check_l1_lower_bound(trajectory, rotor),
        DiagnosticReport.skipped("norm_growth", "planar-rotor", {"k": 1}, "truncation-edge population above guard"),
    ]
    repos = create_artifact_repositories(output_dir)
    repos.reports.save(reports).run()
    lines = (output_dir / "reports.jsonl").read_text(encoding="utf-8").splitlines()
    assert len(lines) == 2
    first = json.loads(lines[0])
    assert list(first) == sorted(first)
    loaded = repos.reports.load().run()
    assert isinstance(loaded, Success)
    assert [r.verdict for r in loaded.value] == [Verdict.PASS, Verdict.SKIPPED]
    assert loaded.value == reports


def test_summary_document(output_dir: Path) -> None:
    """Test the free-form document repository strips the envelope on load."""
    repos = create_artifact_repositories(output_dir)
    repos.summaries.save({"system": "planar-rotor", "order": 8}).run()
    loaded = repos.summaries.load().run()
    assert isinstance(loaded, Success)
    assert loaded.value == {"system": "planar-rotor", "order": 8}


# Tests for tables
def test_table_column_order(output_dir: Path) -> None:
    """Test that a declared column order is kept."""
    repo = TableRepository(output_dir, columns=["order", "error"])
    repo.save([{"error": 0.5, "order": 4}, {"error": 0.01, "order": 8}]).run()
    text = (output_dir / "sweep.csv").read_text(encoding="utf-8")
    assert text.splitlines() == ["order,error", "4,0.5", "8,0.01"]


def test_empty_table_keeps_header(output_dir: Path) -> None:
    """Test a header-only file for an empty table."""
    TableRepository(output_dir, columns=["order", "error"]).save([]).run()
    assert (output_dir / "sweep.csv").read_text(encoding="utf-8") == "order,error\n"


def test_run_all_stops_at_first_failure(output_dir: Path, staircase_control: PiecewiseConstantControl) -> None:
    """Test sequencing of artifact effects."""
    repo = ControlRepository(output_dir)
    result = run_all([repo.save(staircase_control, "a.json"), repo.load("missing.json"), repo.save(staircase_control, "b.json")])
    assert isinstance(result, Failure)
    assert result.error.code == "FILE_NOT_FOUND"
    assert (output_dir / "a.json").exists()
    assert not (output_dir / "b.json").exists()
