"""Piecewise constant controls, the class PC(U)."""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from .system import ControlSet


@dataclass(frozen=True, eq=False)
class PiecewiseConstantControl:
    """u = Σ_j u_j·1_[t_j, t_{j+1}) with 0 = t_1 < t_2 < ... < t_{p+1}.

    A control with no segments (breakpoints == (0.0,)) is the empty control
    on the horizon [0, 0].

    Attributes:
        breakpoints: Strictly increasing times starting at 0
        values: One real value per segment
    """

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        """Validate the step function."""
        bps = tuple(float(t) for t in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        if not bps or bps[0] != 0.0:
            msg = "Breakpoints must start at t = 0"
            raise ValueError(msg)
        if len(vals) != len(bps) - 1:
            msg = f"Expected {len(bps) - 1} values for {len(bps)} breakpoints, got {len(vals)}"
            raise ValueError(msg)
        if not all(math.isfinite(t) for t in bps):
            msg = "Breakpoints must be finite"
            raise ValueError(msg)
        if not all(math.isfinite(v) for v in vals):
            msg = "Control values must be finite"
            raise ValueError(msg)
        if any(b <= a for a, b in zip(bps, bps[1:])):
            msg = "Breakpoints must be strictly increasing"
            raise ValueError(msg)

    @classmethod
    def empty(cls) -> PiecewiseConstantControl:
        """The control with no segments."""
        return cls(breakpoints=(0.0,), values=())

    @classmethod
    def constant(cls, value: float, horizon: float) -> PiecewiseConstantControl:
        """Single segment u ≡ value on [0, horizon]."""
        if horizon == 0:
            return cls.empty()
        return cls(breakpoints=(0.0, horizon), values=(value,))

    @classmethod
    def from_segments(cls, segments: Sequence[tuple[float, float]]) -> PiecewiseConstantControl:
        """Build from (value, duration) pairs."""
        times = [0.0]
        for _, dt in segments:
            times.append(times[-1] + float(dt))
        return cls(breakpoints=tuple(times), values=tuple(v for v, _ in segments))

    @property
    def horizon(self) -> float:
        """Final time t_{p+1}."""
        return self.breakpoints[-1]

    @property
    def segment_count(self) -> int:
        """Number of constant pieces p."""
        return len(self.values)

    def durations(self) -> np.ndarray:
        """t_{j+1} - t_j for each segment."""
        return np.diff(np.asarray(self.breakpoints))

    def segments(self) -> Iterator[tuple[float, float]]:
        """Yield (value, duration) pairs in time order."""
        yield from zip(self.values, self.durations().tolist())

    def l1_norm(self) -> float:
        """Σ |u_j|·(t_{j+1} - t_j)."""
        return float(np.sum(np.abs(np.asarray(self.values)) * self.durations()))

    def cumulative_l1(self) -> np.ndarray:
        """∫_0^{t_j}|u| at every breakpoint."""
        return np.concatenate([[0.0], np.cumsum(np.abs(np.asarray(self.values)) * self.durations())])

    def max_abs(self) -> float:
        """sup |u|."""
        return float(max((abs(v) for v in self.values), default=0.0))

    def value_at(self, t: float) -> float:
        """u(t), right-continuous; 0 outside [0, horizon)."""
        if t < 0 or t >= self.horizon:
            return 0.0
        j = int(np.searchsorted(self.breakpoints, t, side="right")) - 1
        return self.values[j]

    def within(self, control_set: ControlSet) -> bool:
        """Whether every value lies in U."""
        return all(control_set.contains(v) for v in self.values)

    def scaled(self, factor: float) -> PiecewiseConstantControl:
        """The control factor·u on the same breakpoints."""
        return PiecewiseConstantControl(self.breakpoints, tuple(factor * v for v in self.values))

    def concatenate(self, other: PiecewiseConstantControl) -> PiecewiseConstantControl:
        """Run self, then other shifted to start at self.horizon."""
        shift = self.horizon
        return PiecewiseConstantControl(
            breakpoints=self.breakpoints + tuple(shift + t for t in other.breakpoints[1:]),
            values=self.values + other.values,
        )

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready dictionary."""
        return {"breakpoints": list(self.breakpoints), "values": list(self.values)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> PiecewiseConstantControl:
        """Inverse of to_dict."""
        return cls(breakpoints=tuple(data["breakpoints"]), values=tuple(data["values"]))

    def __eq__(self, other: object) -> bool:
        """Exact equality of breakpoints and values."""
        if not isinstance(other, PiecewiseConstantControl):
            return NotImplemented
        return self.breakpoints == other.breakpoints and self.values == other.values

    def __hash__(self) -> int:
        """Hash consistent with __eq__."""
        return hash((self.breakpoints, self.values))

    def __repr__(self) -> str:
        """Return string representation for debugging."""
        return f"PiecewiseConstantControl(segments={self.segment_count}, horizon={self.horizon:g})"
