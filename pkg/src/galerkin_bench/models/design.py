"""Synthesized pulse designs, ladder schedules and scaling experiments."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .control import PiecewiseConstantControl
from .pulse import PeriodicPulse
from .report import Collision


@dataclass(frozen=True)
class TransferDesign:
    """A rendered resonant pulse for one transition.

    Attributes:
        pulse: The periodic pulse, repetitions already calibrated
        control: Piecewise constant rendering of the pulse
        predicted_fidelity: Target population after the calibrated two-level run
        pi_time: First-order rotating-wave π time
        efficiency: Efficiency of the rendered waveform at the transition frequency
        steps_per_period: Rendering resolution
        collisions: Coupled pairs resonant with an integer harmonic of the transition
        warnings: Collisions at harmonics the waveform actually drives
    """

    pulse: PeriodicPulse
    control: PiecewiseConstantControl
    predicted_fidelity: float
    pi_time: float
    efficiency: float
    steps_per_period: int
    collisions: tuple[Collision, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def l1_norm(self) -> float:
        """||u||_{L^1} of the rendered control."""
        return self.control.l1_norm()

    @property
    def duration(self) -> float:
        """Horizon of the rendered control."""
        return self.control.horizon

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready summary (the control itself is stored separately)."""
        return {
            "pulse": self.pulse.to_dict(),
            "predicted_fidelity": self.predicted_fidelity,
            "pi_time": self.pi_time,
            "efficiency": self.efficiency,
            "steps_per_period": self.steps_per_period,
            "l1_norm": self.l1_norm,
            "duration": self.duration,
            "collisions": [
                {"pair": [c.l, c.m], "harmonic": c.harmonic, "gap": c.gap} for c in self.collisions
            ],
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class LadderSchedule:
    """Consecutive transfers (1, 2), (2, 3), ..., (m - 1, m).

    Attributes:
        legs: One design per rung
        control: Concatenation of the leg controls
        cumulative_l1: L¹ norm spent after each leg
        l1_bound: (5π/4)·Σ_{j<m} |b_{j,j+1}|^{-1}
    """

    legs: tuple[TransferDesign, ...]
    control: PiecewiseConstantControl
    cumulative_l1: tuple[float, ...]
    l1_bound: float

    @property
    def top_level(self) -> int:
        """Level reached by the last leg."""
        return max(self.legs[-1].pulse.transition)

    @property
    def total_l1(self) -> float:
        """||u||_{L^1} of the whole schedule."""
        return self.control.l1_norm()

    @property
    def bound_ratio(self) -> float:
        """total_l1 / l1_bound."""
        return self.total_l1 / self.l1_bound

    def leg_end_times(self) -> list[float]:
        """Time at which each leg finishes."""
        times, t = [], 0.0
        for leg in self.legs:
            t += leg.duration
            times.append(t)
        return times

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready summary."""
        return {
            "top_level": self.top_level,
            "legs": [leg.to_dict() for leg in self.legs],
            "cumulative_l1": list(self.cumulative_l1),
            "total_l1": self.total_l1,
            "l1_bound": self.l1_bound,
            "bound_ratio": self.bound_ratio,
        }


@dataclass(frozen=True)
class ScalingRow:
    """One run of the pulse u*/n over n·T*."""

    n: int
    amplitude: float
    horizon: float
    fidelity: float
    l1_norm: float

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready dictionary."""
        return {
            "n": self.n,
            "amplitude": self.amplitude,
            "horizon": self.horizon,
            "fidelity": self.fidelity,
            "l1_norm": self.l1_norm,
        }


@dataclass(frozen=True)
class ScalingExperiment:
    """Fidelity of u*/n over n·T* for a list of n.

    Attributes:
        rows: One row per n, in the order given
        base_horizon: T*, taken from the design for the largest n
        monotone: Fidelity nondecreasing within the noise allowance (True for one row)
        collisions: Collision scan for the driven transition
    """

    rows: tuple[ScalingRow, ...]
    base_horizon: float
    monotone: bool
    collisions: tuple[Collision, ...] = ()

    @property
    def fidelities(self) -> list[float]:
        """Fidelity column."""
        return [row.fidelity for row in self.rows]
