"""Concrete artifact repositories: JSON documents, JSON lines, CSV tables."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any

import numpy as np

from galerkin_bench.models import DiagnosticReport, PiecewiseConstantControl, Trajectory

from .base import SCHEMA_VERSION, ArtifactRepository, check_schema, json_envelope, open_envelope


class ControlRepository(ArtifactRepository[PiecewiseConstantControl]):
    """Piecewise constant controls as ``control.json``.

    Example:
        >>> repo = ControlRepository("runs/rotor")
        >>> repo.save(design.control).run()
        >>> repo.load().run()
    """

    kind = "control"
    default_name = "control.json"

    def encode(self, artifact: PiecewiseConstantControl) -> str:
        """Serialize breakpoints and values."""
        return json_envelope(self.kind, artifact.to_dict())

    def decode(self, text: str) -> PiecewiseConstantControl:
        """Parse and validate a control document."""
        return PiecewiseConstantControl.from_dict(open_envelope(self.kind, text))


def load_control_file(path: str | Path) -> PiecewiseConstantControl:
    """Read a control document directly (raises on any problem)."""
    return ControlRepository(Path(path).parent).decode(Path(path).read_text(encoding="utf-8"))


class TrajectoryRepository(ArtifactRepository[Trajectory]):
    """Full trajectories as ``trajectory.json`` (states split into real and imaginary parts)."""

    kind = "trajectory"
    default_name = "trajectory.json"

    def encode(self, artifact: Trajectory) -> str:
        """Serialize grid, states, bookkeeping and the control."""
        return json_envelope(
            self.kind,
            {
                "system": artifact.system_name,
                "order": artifact.order,
                "times": artifact.times.tolist(),
                "states_re": artifact.states.real.tolist(),
                "states_im": artifact.states.imag.tolist(),
                "cumulative_l1": artifact.cumulative_l1.tolist(),
                "segment_index": artifact.segment_index.tolist(),
                "control": artifact.control.to_dict(),
            },
        )

    def decode(self, text: str) -> Trajectory:
        """Parse a trajectory document."""
        data = open_envelope(self.kind, text)
        states = np.asarray(data["states_re"], dtype=float) + 1j * np.asarray(data["states_im"], dtype=float)
        return Trajectory(
            times=np.asarray(data["times"], dtype=float),
            states=states.reshape(len(data["times"]), int(data["order"])),
            order=int(data["order"]),
            control=PiecewiseConstantControl.from_dict(data["control"]),
            cumulative_l1=np.asarray(data["cumulative_l1"], dtype=float),
            segment_index=np.asarray(data["segment_index"], dtype=np.int64),
            system_name=str(data["system"]),
        )


def trajectory_columns(order: int) -> list[str]:
    """CSV header: t, re_k, im_k for every level, then pop_k."""
    return (
        ["t"]
        + [f"{part}_{k}" for k in range(1, order + 1) for part in ("re", "im")]
        + [f"pop_{k}" for k in range(1, order + 1)]
    )


class TrajectoryCsvRepository(ArtifactRepository[list[dict[str, float]]]):
    """Plot-ready trajectory time series as ``trajectory.csv``.

    The CSV is an export; ``rows_for`` builds its rows from a Trajectory and
    ``load`` returns its rows.
    """

    kind = "trajectory-csv"
    default_name = "trajectory.csv"

    def encode(self, artifact: list[dict[str, float]]) -> str:
        """Write rows with the columns of the first row."""
        buffer = io.StringIO()
        if artifact:
            writer = csv.DictWriter(buffer, fieldnames=list(artifact[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(artifact)
        return buffer.getvalue()

    def decode(self, text: str) -> list[dict[str, float]]:
        """Read rows back as floats."""
        return [{key: float(value) for key, value in row.items()} for row in csv.DictReader(io.StringIO(text))]

    @staticmethod
    def rows_for(trajectory: Trajectory) -> list[dict[str, float]]:
        """One row per grid time."""
        columns = trajectory_columns(trajectory.order)
        populations = trajectory.populations()
        table = np.column_stack(
            [trajectory.times]
            + [part for k in range(trajectory.order) for part in (trajectory.states[:, k].real, trajectory.states[:, k].imag)]
            + [populations[:, k] for k in range(trajectory.order)]
        )
        return [dict(zip(columns, (float(v) for v in row))) for row in table]


class ReportRepository(ArtifactRepository[list[DiagnosticReport]]):
    """Diagnostic reports as JSON lines, one report per line, ``reports.jsonl``."""

    kind = "report"
    default_name = "reports.jsonl"

    def encode(self, artifact: list[DiagnosticReport]) -> str:
        """One sorted-key JSON object per report."""
        lines = [
            json.dumps(
                {"schema_version": SCHEMA_VERSION, "kind": self.kind, **r.to_dict()}, sort_keys=True, separators=(",", ":")
            )
            for r in artifact
        ]
        return "".join(line + "\n" for line in lines)

    def decode(self, text: str) -> list[DiagnosticReport]:
        """Parse every non-empty line."""
        reports = []
        for line in text.splitlines():
            if not line.strip():
                continue
            data = json.loads(line)
            check_schema(self.kind, data)
            reports.append(DiagnosticReport.from_dict(data))
        return reports


class DocumentRepository(ArtifactRepository[dict[str, Any]]):
    """Free-form JSON documents of one kind (run summaries, design summaries)."""

    def __init__(self, directory: str | Path, kind: str, default_name: str) -> None:
        """Initialize repository.

        Args:
            directory: Output directory
            kind: Document kind stored in the envelope
            default_name: File name inside the directory
        """
        super().__init__(directory)
        self.kind = kind
        self.default_name = default_name

    def encode(self, artifact: dict[str, Any]) -> str:
        """Wrap the document in a versioned envelope."""
        return json_envelope(self.kind, artifact)

    def decode(self, text: str) -> dict[str, Any]:
        """Unwrap the envelope."""
        data = open_envelope(self.kind, text)
        return {key: value for key, value in data.items() if key not in ("schema_version", "kind")}


class TableRepository(ArtifactRepository[list[dict[str, Any]]]):
    """Aggregated sweep tables as CSV with a fixed column order."""

    kind = "table"
    default_name = "sweep.csv"

    def __init__(self, directory: str | Path, columns: list[str] | None = None) -> None:
        """Initialize repository.

        Args:
            directory: Output directory
            columns: Column order; defaults to the keys of the first row
        """
        super().__init__(directory)
        self.columns = columns

    def encode(self, artifact: list[dict[str, Any]]) -> str:
        """Header plus one line per row (header only for an empty table with known columns)."""
        columns = self.columns or (list(artifact[0]) if artifact else [])
        buffer = io.StringIO()
        if columns:
            writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
            writer.writeheader()
            writer.writerows(artifact)
        return buffer.getvalue()

    def decode(self, text: str) -> list[dict[str, Any]]:
        """Read rows as strings keyed by column."""
        return [dict(row) for row in csv.DictReader(io.StringIO(text))]
