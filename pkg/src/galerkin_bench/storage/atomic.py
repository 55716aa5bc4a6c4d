"""Atomic, locked file writes for run artifacts.

Writes go to a temporary sibling file under an exclusive ``fcntl`` lock and
are then renamed over the target, so a reader never sees a partial artifact.
"""

from __future__ import annotations

import fcntl
import threading
from pathlib import Path

_write_lock = threading.Lock()


def write_text_atomic(path: Path, text: str) -> Path:
    """Atomically replace path with text; parent directories are created.

    Args:
        path: Target file
        text: Full file contents

    Returns:
        The written path
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_path = path.with_name(path.name + ".tmp")
    with _write_lock:
        try:
            with temp_path.open("w", encoding="utf-8", newline="") as f:
                fcntl.flock(f.fileno(), fcntl.LOCK_EX)
                try:
                    f.write(text)
                finally:
                    fcntl.flock(f.fileno(), fcntl.LOCK_UN)
            temp_path.replace(path)
        except Exception:
            if temp_path.exists():
                temp_path.unlink()
            raise
    return path


def read_text_locked(path: Path) -> str:
    """Read a file under a shared lock."""
    with path.open(encoding="utf-8", newline="") as f:
        fcntl.flock(f.fileno(), fcntl.LOCK_SH)
        try:
            return f.read()
        finally:
            fcntl.flock(f.fileno(), fcntl.LOCK_UN)
