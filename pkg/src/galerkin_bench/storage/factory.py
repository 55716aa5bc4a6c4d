"""Factory for the repositories of one run directory."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .repositories import (
    ControlRepository,
    DocumentRepository,
    ReportRepository,
    TableRepository,
    TrajectoryCsvRepository,
    TrajectoryRepository,
)


@dataclass(frozen=True)
class ArtifactRepositories:
    """Container for all repositories writing into one output directory.

    Example:
        >>> repos = create_artifact_repositories("runs/rotor")
        >>> repos.controls.save(control).run()
        >>> repos.reports.save(reports).run()
    """

    directory: Path
    controls: ControlRepository
    trajectories: TrajectoryRepository
    trajectory_csv: TrajectoryCsvRepository
    reports: ReportRepository
    summaries: DocumentRepository
    designs: DocumentRepository
    tables: TableRepository


def create_artifact_repositories(directory: str | Path) -> ArtifactRepositories:
    """Create repositories for one run directory.

    Args:
        directory: Output directory (created on first write)

    Returns:
        ArtifactRepositories container
    """
    path = Path(directory)
    return ArtifactRepositories(
        directory=path,
        controls=ControlRepository(path),
        trajectories=TrajectoryRepository(path),
        trajectory_csv=TrajectoryCsvRepository(path),
        reports=ReportRepository(path),
        summaries=DocumentRepository(path, kind="summary", default_name="summary.json"),
        designs=DocumentRepository(path, kind="design", default_name="design.json"),
        tables=TableRepository(path),
    )
