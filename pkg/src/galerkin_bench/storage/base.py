"""Artifact repository protocol.

Every repository stores one artifact kind under an output directory and
returns suspended effects, so nothing touches the filesystem until ``.run()``.
"""

from __future__ import annotations

import json
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Generic, TypeVar

from galerkin_bench.effects import IO, Effect, ErrorDetails, Failure, Result, Success

from .atomic import read_text_locked, write_text_atomic

Artifact = TypeVar("Artifact")
T = TypeVar("T")

SCHEMA_VERSION = 1


class SchemaMismatchError(ValueError):
    """An artifact file of the wrong kind or schema version."""


class ArtifactRepository(ABC, Generic[Artifact]):
    """Save and load one artifact kind.

    Save-Load Law: saving then loading returns an equal artifact
        repo.save(a).flat_map(lambda _: repo.load()) == IO[Success(a)]

    Type Parameters:
        Artifact: The stored domain object (control, trajectory, reports, ...)
    """

    kind: str = ""
    default_name: str = ""

    def __init__(self, directory: str | Path) -> None:
        """Initialize repository.

        Args:
            directory: Output directory for this run
        """
        self.directory = Path(directory)

    def path_for(self, name: str | None = None) -> Path:
        """Resolve an artifact file name inside the output directory."""
        return self.directory / (name or self.default_name)

    @abstractmethod
    def encode(self, artifact: Artifact) -> str:
        """Serialize an artifact to file text."""

    @abstractmethod
    def decode(self, text: str) -> Artifact:
        """Parse file text; raise ValueError or KeyError on malformed content."""

    def save(self, artifact: Artifact, name: str | None = None) -> IO[Result[ErrorDetails, Path]]:
        """Atomically write an artifact."""
        path = self.path_for(name)

        def _save() -> Result[ErrorDetails, Path]:
            try:
                return Success(write_text_atomic(path, self.encode(artifact)))
            except OSError as e:
                return Failure(
                    ErrorDetails(code="STORAGE_ERROR", message=f"Failed to write {self.kind}: {e}", details={"path": str(path)})
                )

        return Effect(_save)

    def load(self, name: str | Path | None = None) -> IO[Result[ErrorDetails, Artifact]]:
        """Read and validate an artifact.

        Returns:
            IO containing Result with the artifact, or FILE_NOT_FOUND,
            SCHEMA_MISMATCH or STORAGE_ERROR
        """
        path = Path(name) if isinstance(name, Path) else self.path_for(name)

        def _load() -> Result[ErrorDetails, Artifact]:
            if not path.exists():
                return Failure(ErrorDetails("FILE_NOT_FOUND", f"No {self.kind} file at {path}", {"path": str(path)}))
            try:
                return Success(self.decode(read_text_locked(path)))
            except SchemaMismatchError as e:
                return Failure(ErrorDetails("SCHEMA_MISMATCH", str(e), {"path": str(path), "expected": self.kind}))
            except (OSError, ValueError, KeyError, TypeError) as e:
                return Failure(
                    ErrorDetails("STORAGE_ERROR", f"Failed to read {self.kind}: {e}", {"path": str(path)})
                )

        return Effect(_load)


def json_envelope(kind: str, payload: dict[str, Any]) -> str:
    """Versioned JSON document with a ``kind`` tag."""
    return json.dumps({"schema_version": SCHEMA_VERSION, "kind": kind, **payload}, indent=2, sort_keys=True) + "\n"


def open_envelope(kind: str, text: str) -> dict[str, Any]:
    """Parse a versioned JSON document and check its kind and version.

    Raises:
        SchemaMismatchError: On a different kind or schema version
    """
    data = json.loads(text)
    if not isinstance(data, dict):
        msg = "Artifact must be a JSON object"
        raise ValueError(msg)
    check_schema(kind, data)
    return data


def check_schema(kind: str, data: dict[str, Any]) -> None:
    """Validate the schema_version and kind fields of a record."""
    if data.get("schema_version") != SCHEMA_VERSION:
        msg = f"Unsupported schema_version {data.get('schema_version')!r}, expected {SCHEMA_VERSION}"
        raise SchemaMismatchError(msg)
    if data.get("kind") != kind:
        msg = f"Artifact kind {data.get('kind')!r}, expected {kind!r}"
        raise SchemaMismatchError(msg)


def run_all(effects: list[IO[Result[ErrorDetails, T]]]) -> Result[ErrorDetails, list[T]]:
    """Run effects in order, stopping at the first Failure."""
    values: list[T] = []
    for io in effects:
        result = io.run()
        if isinstance(result, Failure):
            return Failure(result.error)
        values.append(result.value)
    return Success(values)

