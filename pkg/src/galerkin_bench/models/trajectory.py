"""Trajectories of Galerkin systems."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .control import PiecewiseConstantControl


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution x(t) of dx/dt = (A^(N) + u(t)B^(N))x.

    Attributes:
        times: Grid times, starting at 0 and containing every control breakpoint
        states: Array of shape (len(times), N), one coefficient vector per time
        order: Truncation order N
        control: The control that produced the run
        cumulative_l1: ∫_0^t |u| at every grid time
        segment_index: Index of the control segment that ends at or contains each
            grid time (-1 for t = 0)
        system_name: Name of the system that was propagated
    """

    times: np.ndarray
    states: np.ndarray
    order: int
    control: PiecewiseConstantControl
    cumulative_l1: np.ndarray
    segment_index: np.ndarray
    system_name: str = ""

    def __post_init__(self) -> None:
        """Freeze arrays and check the grid."""
        times = np.array(self.times, dtype=float)
        states = np.array(self.states, dtype=complex)
        if times.ndim != 1 or times.size == 0 or times[0] != 0.0:
            msg = "Trajectory times must be a non-empty grid starting at 0"
            raise ValueError(msg)
        if states.shape != (times.size, self.order):
            msg = f"States must have shape ({times.size}, {self.order}), got {states.shape}"
            raise ValueError(msg)
        for name, array in (
            ("times", times),
            ("states", states),
            ("cumulative_l1", np.array(self.cumulative_l1, dtype=float)),
            ("segment_index", np.array(self.segment_index, dtype=np.int64)),
        ):
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    @property
    def control_l1(self) -> float:
        """||u||_{L^1} over the whole run."""
        return float(self.cumulative_l1[-1])

    @property
    def initial_state(self) -> np.ndarray:
        """x(0)."""
        return self.states[0]

    @property
    def terminal_state(self) -> np.ndarray:
        """x(T)."""
        return self.states[-1]

    def populations(self) -> np.ndarray:
        """|x_k(t)|² for every grid time and level."""
        return np.abs(self.states) ** 2

    def norms(self) -> np.ndarray:
        """||x(t)||_2 at every grid time."""
        return np.linalg.norm(self.states, axis=1)

    def max_norm_deviation(self) -> float:
        """max_t | ||x(t)|| - 1 |."""
        return float(np.max(np.abs(self.norms() - 1.0)))

    def edge_population(self) -> float:
        """Largest population of the top retained level over the run."""
        return float(np.max(np.abs(self.states[:, -1]) ** 2))

    def terminal_population(self, level: int) -> float:
        """|<φ_level, x(T)>|², 0 when the level is not retained."""
        if level > self.order:
            return 0.0
        return float(abs(self.terminal_state[level - 1]) ** 2)

    def distance_to(self, other: Trajectory) -> float:
        """Terminal-state distance after zero padding to the larger order."""
        n = max(self.order, other.order)
        a = np.zeros(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        a[: self.order] = self.terminal_state
        b[: other.order] = other.terminal_state
        return float(np.linalg.norm(a - b))

    def __repr__(self) -> str:
        """Return string representation for debugging."""
        return f"Trajectory({self.system_name}, N={self.order}, samples={self.times.size})"
