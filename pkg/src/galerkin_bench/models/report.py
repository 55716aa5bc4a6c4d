"""Diagnostic records and transition structure."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional


class Verdict(str, Enum):
    """Outcome of one check."""

    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class DiagnosticReport:
    """Pass/fail record for one inequality or structural check.

    For inequality checks the verdict is PASS iff measured <= bound + tolerance.
    A SKIPPED report always carries a reason.

    Attributes:
        check: Check name, e.g. ``norm_growth``
        system: System name
        parameters: Inputs that identify the check (k, c_k, order, ...)
        measured: Measured value
        bound: Bound the measured value is compared against
        tolerance: Slack allowed on top of the bound
        verdict: PASS, FAIL or SKIPPED
        reason: Why the check was skipped (or extra context on failure)
        guard: Guard state, e.g. the truncation-edge population
        extra: Additional measured quantities (worst time, margins)
    """

    check: str
    system: str
    parameters: dict[str, Any]
    measured: Optional[float]
    bound: Optional[float]
    tolerance: float
    verdict: Verdict
    reason: str = ""
    guard: dict[str, Any] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Enforce the verdict invariants."""
        if self.verdict is Verdict.SKIPPED and not self.reason:
            msg = "Skipped reports must carry a reason"
            raise ValueError(msg)
        if self.verdict is not Verdict.SKIPPED and self.measured is not None and self.bound is not None:
            holds = self.measured <= self.bound + self.tolerance
            if holds != (self.verdict is Verdict.PASS):
                msg = f"Verdict {self.verdict.value} inconsistent with measured/bound"
                raise ValueError(msg)

    @classmethod
    def inequality(
        cls,
        check: str,
        system: str,
        parameters: dict[str, Any],
        measured: float,
        bound: float,
        tolerance: float,
        guard: Optional[dict[str, Any]] = None,
        extra: Optional[dict[str, Any]] = None,
    ) -> DiagnosticReport:
        """Build a report whose verdict is decided by measured <= bound + tolerance."""
        verdict = Verdict.PASS if measured <= bound + tolerance else Verdict.FAIL
        return cls(check, system, parameters, measured, bound, tolerance, verdict, "", guard or {}, extra or {})

    @classmethod
    def skipped(
        cls, check: str, system: str, parameters: dict[str, Any], reason: str, guard: Optional[dict[str, Any]] = None
    ) -> DiagnosticReport:
        """Build a SKIPPED report."""
        return cls(check, system, parameters, None, None, 0.0, Verdict.SKIPPED, reason, guard or {})

    @property
    def passed(self) -> bool:
        """True for PASS."""
        return self.verdict is Verdict.PASS

    @property
    def failed(self) -> bool:
        """True for FAIL."""
        return self.verdict is Verdict.FAIL

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready dictionary."""
        return {
            "check": self.check,
            "system": self.system,
            "parameters": self.parameters,
            "measured": self.measured,
            "bound": self.bound,
            "tolerance": self.tolerance,
            "verdict": self.verdict.value,
            "reason": self.reason,
            "guard": self.guard,
            "extra": self.extra,
        }

    def to_json_line(self) -> str:
        """Deterministic single-line JSON (sorted keys)."""
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> DiagnosticReport:
        """Inverse of to_dict."""
        return cls(
            check=data["check"],
            system=data["system"],
            parameters=dict(data.get("parameters", {})),
            measured=data.get("measured"),
            bound=data.get("bound"),
            tolerance=float(data.get("tolerance", 0.0)),
            verdict=Verdict(data["verdict"]),
            reason=data.get("reason", ""),
            guard=dict(data.get("guard", {})),
            extra=dict(data.get("extra", {})),
        )


@dataclass(frozen=True)
class TransitionEdge:
    """Coupled pair j < k with its transition frequency."""

    j: int
    k: int
    gap: float
    coupling_abs: float
    degenerate: bool = False

    @property
    def pair(self) -> tuple[int, int]:
        """(j, k)."""
        return (self.j, self.k)


@dataclass(frozen=True)
class GapCoincidence:
    """Coupled pairs sharing one transition frequency."""

    gap: float
    pairs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class TransitionGraph:
    """Undirected graph of coupled levels up to a scan depth.

    Attributes:
        order: Scan depth N (vertices 1..N)
        edges: Coupled pairs, j < k, sorted
        coincidences: Groups of two or more edges with equal gaps
        tolerance: Absolute gap tolerance used by the scan
    """

    order: int
    edges: tuple[TransitionEdge, ...]
    coincidences: tuple[GapCoincidence, ...]
    tolerance: float

    def edge_set(self) -> set[tuple[int, int]]:
        """All coupled pairs."""
        return {e.pair for e in self.edges}

    def nondegenerate_edges(self) -> tuple[TransitionEdge, ...]:
        """Edges whose frequency is not shared by an overlapping coupled pair."""
        return tuple(e for e in self.edges if not e.degenerate)

    def degenerate_edges(self) -> tuple[TransitionEdge, ...]:
        """Edges flagged degenerate."""
        return tuple(e for e in self.edges if e.degenerate)

    def adjacency(self, nondegenerate_only: bool = False) -> dict[int, list[int]]:
        """Neighbor lists for levels 1..N, ascending."""
        adj: dict[int, list[int]] = {v: [] for v in range(1, self.order + 1)}
        for e in self.edges:
            if nondegenerate_only and e.degenerate:
                continue
            adj[e.j].append(e.k)
            adj[e.k].append(e.j)
        return {v: sorted(ns) for v, ns in adj.items()}

    def coincidence_with(self, pair: tuple[int, int]) -> Optional[GapCoincidence]:
        """The coincidence group containing a pair, if any."""
        key = tuple(sorted(pair))
        return next((c for c in self.coincidences if key in c.pairs), None)


@dataclass(frozen=True)
class ChainReport:
    """Non-degenerate chain of connectedness up to a scan depth.

    Attributes:
        order: Scan depth N; certification only holds up to N
        tree: BFS spanning tree over non-degenerate edges, rooted at level 1
        edges: Every non-degenerate edge inside the component
        component: Levels reached from level 1
    """

    order: int
    tree: tuple[tuple[int, int], ...]
    edges: tuple[tuple[int, int], ...]
    component: tuple[int, ...]

    @property
    def spanning(self) -> bool:
        """Whether the component is all of 1..N."""
        return len(self.component) == self.order


@dataclass(frozen=True)
class Collision:
    """Coupled pair whose gap is an integer multiple of a driven transition frequency."""

    l: int  # noqa: E741
    m: int
    harmonic: int
    gap: float
