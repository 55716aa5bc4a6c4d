"""Truncation-order search records."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class TruncationRow:
    """Terminal-state distance between two truncation orders."""

    order: int
    reference_order: int
    error: float

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready dictionary."""
        return {"order": self.order, "reference_order": self.reference_order, "error": self.error}


@dataclass(frozen=True)
class TruncationReport:
    """Outcome of an order-N versus order-2N doubling search.

    Attributes:
        order: Smallest order in the doubling sequence that met the target
        eps: Target terminal-state distance
        rows: Error curve in doubling order
    """

    order: int
    eps: float
    rows: tuple[TruncationRow, ...]

    @property
    def errors(self) -> list[float]:
        """Error column of the curve."""
        return [row.error for row in self.rows]

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready dictionary."""
        return {"order": self.order, "eps": self.eps, "rows": [row.to_dict() for row in self.rows]}
