"""Structured error information carried by Failure."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class ErrorDetails:
    """Error payload for Result.

    Attributes:
        code: Machine-readable code, e.g. ``"TRUNCATION_CAP_EXCEEDED"`` or ``"NO_TRANSFER"``.
        message: Human-readable description.
        details: Context for the failure (error curves, offending indices, paths).
    """

    code: str
    message: str
    details: dict[str, Any] = field(default_factory=dict)

    def __str__(self) -> str:
        """Return human-readable error representation."""
        if self.details:
            return f"{self.code}: {self.message} (details: {self.details})"
        return f"{self.code}: {self.message}"

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready dictionary."""
        return {"code": self.code, "message": self.message, "details": dict(self.details)}
