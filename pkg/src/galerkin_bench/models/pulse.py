"""Resonant periodic pulses."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from .types import Transition


class Waveform(str, Enum):
    """Named unit-amplitude waveform over one period."""

    COSINE = "cosine"
    SQUARE = "square"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class PeriodicPulse:
    """A periodic control u*(t) = amplitude·shape(frequency·t + phase).

    Attributes:
        waveform: Shape of one period
        transition: Pair (j, k) the pulse is tuned to
        frequency: |λ_j - λ_k|
        amplitude: Nonnegative scale
        repetitions: Number of periods rendered
        phase: Phase offset in radians
        table: One period of values for tabulated waveforms, equal-width cells
    """

    waveform: Waveform
    transition: Transition
    frequency: float
    amplitude: float = 1.0
    repetitions: int = 1
    phase: float = 0.0
    table: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        """Validate the pulse parameters."""
        if not self.frequency > 0:
            msg = f"Pulse frequency must be positive, got {self.frequency}"
            raise ValueError(msg)
        if self.amplitude < 0:
            msg = f"Amplitude must be nonnegative, got {self.amplitude}"
            raise ValueError(msg)
        if self.repetitions < 1:
            msg = f"Repetitions must be positive, got {self.repetitions}"
            raise ValueError(msg)
        if self.waveform is Waveform.TABULATED and not self.table:
            msg = "Tabulated waveform needs a table"
            raise ValueError(msg)
        object.__setattr__(self, "table", tuple(float(v) for v in self.table))

    @property
    def period(self) -> float:
        """2π / |λ_j - λ_k|."""
        return 2.0 * math.pi / self.frequency

    @property
    def duration(self) -> float:
        """repetitions·period."""
        return self.repetitions * self.period

    def shape(self, theta: np.ndarray) -> np.ndarray:
        """Unit-amplitude shape at angle theta (phase already included)."""
        theta = np.asarray(theta, dtype=float)
        if self.waveform is Waveform.COSINE:
            return np.cos(theta)
        if self.waveform is Waveform.SQUARE:
            return np.sign(np.cos(theta))
        cells = len(self.table)
        index = np.floor(np.mod(theta, 2.0 * math.pi) / (2.0 * math.pi) * cells).astype(np.int64)
        return np.asarray(self.table)[np.clip(index, 0, cells - 1)]

    def value(self, t: np.ndarray) -> np.ndarray:
        """u*(t)."""
        return self.amplitude * self.shape(self.frequency * np.asarray(t, dtype=float) + self.phase)

    def with_amplitude(self, amplitude: float) -> PeriodicPulse:
        """Same pulse with a different amplitude."""
        return PeriodicPulse(
            self.waveform, self.transition, self.frequency, amplitude, self.repetitions, self.phase, self.table
        )

    def with_repetitions(self, repetitions: int) -> PeriodicPulse:
        """Same pulse rendered over a different number of periods."""
        return PeriodicPulse(
            self.waveform, self.transition, self.frequency, self.amplitude, repetitions, self.phase, self.table
        )

    def with_phase(self, phase: float) -> PeriodicPulse:
        """Same pulse translated in time by phase/frequency."""
        return PeriodicPulse(
            self.waveform, self.transition, self.frequency, self.amplitude, self.repetitions, phase, self.table
        )

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready dictionary."""
        data: dict[str, Any] = {
            "waveform": self.waveform.value,
            "transition": list(self.transition),
            "frequency": self.frequency,
            "amplitude": self.amplitude,
            "repetitions": self.repetitions,
            "phase": self.phase,
        }
        if self.table:
            data["table"] = list(self.table)
        return data
