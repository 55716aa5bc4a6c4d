"""Run artifacts: controls, trajectories, reports and tables on disk."""

from .base import SCHEMA_VERSION, ArtifactRepository, SchemaMismatchError, run_all
from .factory import ArtifactRepositories, create_artifact_repositories
from .repositories import (
    ControlRepository,
    DocumentRepository,
    ReportRepository,
    TableRepository,
    TrajectoryCsvRepository,
    TrajectoryRepository,
    load_control_file,
    trajectory_columns,
)

__all__ = [
    "SCHEMA_VERSION",
    "ArtifactRepository",
    "SchemaMismatchError",
    "run_all",
    "ArtifactRepositories",
    "create_artifact_repositories",
    "ControlRepository",
    "DocumentRepository",
    "ReportRepository",
    "TableRepository",
    "TrajectoryCsvRepository",
    "TrajectoryRepository",
    "load_control_file",
    "trajectory_columns",
]
