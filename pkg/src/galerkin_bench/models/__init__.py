"""Domain models (frozen dataclasses) and phantom index types."""

from .compression import Compression, measured_bandwidth
from .design import LadderSchedule, ScalingExperiment, ScalingRow, TransferDesign
from .convergence import TruncationReport, TruncationRow
from .control import PiecewiseConstantControl
from .pulse import PeriodicPulse, Waveform
from .report import (
    ChainReport,
    Collision,
    DiagnosticReport,
    GapCoincidence,
    TransitionEdge,
    TransitionGraph,
    Verdict,
)
from .system import ControlSet, ControlSetKind, SpectralSystem
from .trajectory import Trajectory
from .types import Level, Order, SystemName, Transition

__all__ = [
    "Level",
    "Order",
    "SystemName",
    "Transition",
    "ControlSet",
    "ControlSetKind",
    "SpectralSystem",
    "Compression",
    "measured_bandwidth",
    "PiecewiseConstantControl",
    "Trajectory",
    "TruncationRow",
    "TruncationReport",
    "PeriodicPulse",
    "Waveform",
    "DiagnosticReport",
    "Verdict",
    "TransitionEdge",
    "GapCoincidence",
    "TransitionGraph",
    "ChainReport",
    "Collision",
    "TransferDesign",
    "LadderSchedule",
    "ScalingRow",
    "ScalingExperiment",
]
