"""Propagation of Galerkin systems dx/dt = (A^(N) + u(t)B^(N))x.

Each constant segment advances by exp(dt·(A^(N) + uB^(N))) = V·exp(-iw·dt)·V^*,
where i(A^(N) + uB^(N)) = V·diag(w)·V^* is Hermitian. Decompositions are cached
per control value for the lifetime of one ``GalerkinPropagator``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from typing import Callable, Optional

import numpy as np
from scipy import linalg

from galerkin_bench.models import Compression, PiecewiseConstantControl, Trajectory

logger = logging.getLogger(__name__)

DENSE_ORDER_WARNING = 2000
NORM_TOLERANCE = 1e-10


class GalerkinPropagator:
    """Segment-wise exponential propagator for one compression.

    Example:
        >>> prop = GalerkinPropagator(compress(make_planar_rotor(), 12))
        >>> traj = prop.propagate(control, basis_state(12, 1), sample_dt=0.05)
    """

    def __init__(self, compression: Compression) -> None:
        """Initialize with an empty per-run cache.

        Args:
            compression: The Galerkin pair (A^(N), B^(N))
        """
        self.compression = compression
        self._eigen: dict[float, tuple[np.ndarray, np.ndarray]] = {}
        self._exponentials: dict[tuple[float, float], np.ndarray] = {}
        if compression.order > DENSE_ORDER_WARNING:
            logger.warning(
                f"Dense decomposition above {DENSE_ORDER_WARNING} levels - order: {compression.order}, "
                f"flops_per_control_value: {float(compression.order) ** 3:.2e}"
            )

    @property
    def cache_size(self) -> int:
        """Number of distinct control values decomposed so far."""
        return len(self._eigen)

    def eigensystem(self, u: float) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues w and eigenvectors V of i(A^(N) + uB^(N))."""
        cached = self._eigen.get(u)
        if cached is not None:
            return cached
        h = self.compression.hermitian_generator(u)
        if self.compression.is_banded():
            band = self.compression.bandwidth
            n = self.compression.order
            packed = np.zeros((band + 1, n), dtype=complex)
            for d in range(band + 1):
                packed[band - d, d:] = np.diagonal(h, offset=d)
            w, v = linalg.eig_banded(packed, lower=False)
        else:
            w, v = linalg.eigh(h)
        self._eigen[u] = (w, v)
        return w, v

    def segment_exponential(self, u: float, dt: float) -> np.ndarray:
        """exp(dt·(A^(N) + uB^(N))); dt may be negative."""
        key = (u, dt)
        cached = self._exponentials.get(key)
        if cached is not None:
            return cached
        w, v = self.eigensystem(u)
        matrix = (v * np.exp(-1j * w * dt)[None, :]) @ v.conj().T
        self._exponentials[key] = matrix
        return matrix

    def propagator_matrix_from_segments(self, segments: Sequence[tuple[float, float]]) -> np.ndarray:
        """Product of segment exponentials in time order, the last segment leftmost."""
        result = np.eye(self.compression.order, dtype=complex)
        for u, dt in segments:
            result = self.segment_exponential(u, dt) @ result
        return result

    def propagator_matrix(self, control: PiecewiseConstantControl) -> np.ndarray:
        """X^u_(N)(T, 0) for a piecewise constant control."""
        self._check_control(control)
        return self.propagator_matrix_from_segments(list(control.segments()))

    def terminal_state(self, control: PiecewiseConstantControl, psi0: np.ndarray) -> np.ndarray:
        """x(T) without storing intermediate states."""
        x = self._check_state(psi0)
        self._check_control(control)
        for u, dt in control.segments():
            w, v = self.eigensystem(u)
            x = v @ (np.exp(-1j * w * dt) * (v.conj().T @ x))
        return x

    def propagate(
        self, control: PiecewiseConstantControl, psi0: np.ndarray, sample_dt: Optional[float] = None
    ) -> Trajectory:
        """Propagate psi0 under a piecewise constant control.

        The grid holds t = 0, every breakpoint, and, when sample_dt is given,
        intermediate samples every sample_dt inside each segment.

        Args:
            control: Piecewise constant control
            psi0: Initial coefficient vector of length N and unit norm
            sample_dt: Optional sampling step inside segments

        Raises:
            ValueError: For non-unit psi0, wrong length, non-positive sample_dt,
                or control values outside the system's control set
        """
        x = self._check_state(psi0)
        self._check_control(control)
        if sample_dt is not None and not sample_dt > 0:
            msg = f"sample_dt must be positive, got {sample_dt}"
            raise ValueError(msg)

        times: list[np.ndarray] = [np.zeros(1)]
        states: list[np.ndarray] = [x[None, :]]
        l1: list[np.ndarray] = [np.zeros(1)]
        index: list[np.ndarray] = [np.full(1, -1, dtype=np.int64)]
        start_l1 = control.cumulative_l1()

        for j, (u, dt) in enumerate(control.segments()):
            t0 = control.breakpoints[j]
            offsets = _segment_offsets(dt, sample_dt)
            w, v = self.eigensystem(u)
            y = v.conj().T @ x
            block = (v @ (np.exp(-1j * np.outer(w, offsets)) * y[:, None])).T
            times.append(t0 + offsets)
            states.append(block)
            l1.append(start_l1[j] + abs(u) * offsets)
            index.append(np.full(offsets.size, j, dtype=np.int64))
            x = block[-1]

        # the final grid point of each segment is its breakpoint, exactly
        grid = np.concatenate(times)
        ends = np.cumsum([t.size for t in times]) - 1
        grid[ends] = np.asarray(control.breakpoints)

        logger.info(
            f"Propagated trajectory - system: {self.compression.parent.name}, order: {self.compression.order}, "
            f"segments: {control.segment_count}, samples: {grid.size}, cached_values: {self.cache_size}"
        )
        return Trajectory(
            times=grid,
            states=np.concatenate(states),
            order=self.compression.order,
            control=control,
            cumulative_l1=np.concatenate(l1),
            segment_index=np.concatenate(index),
            system_name=self.compression.parent.name,
        )

    def _check_state(self, psi0: np.ndarray) -> np.ndarray:
        x = np.asarray(psi0, dtype=complex)
        n = self.compression.order
        if x.shape != (n,):
            logger.error(f"Initial state has wrong shape - expected: {n}, got: {x.shape}")
            msg = f"Initial state must have length {n}, got shape {x.shape}"
            raise ValueError(msg)
        if not np.all(np.isfinite(x)):
            msg = "Initial state must be finite"
            raise ValueError(msg)
        norm = float(np.linalg.norm(x))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            logger.error(f"Initial state is not normalized - norm: {norm}")
            msg = f"Initial state must have unit norm, got {norm}"
            raise ValueError(msg)
        return x

    def _check_control(self, control: PiecewiseConstantControl) -> None:
        control_set = self.compression.parent.control_set
        if not control.within(control_set):
            msg = f"Control leaves the control set of {self.compression.parent.name}"
            raise ValueError(msg)


def _segment_offsets(dt: float, sample_dt: Optional[float]) -> np.ndarray:
    """Sample offsets within a segment of length dt, ending exactly at dt."""
    if sample_dt is None or sample_dt >= dt:
        return np.array([dt])
    count = math.ceil(dt / sample_dt - 1e-9)
    inner = sample_dt * np.arange(1, count)
    return np.append(inner[inner < dt * (1.0 - 1e-12)], dt)


def basis_state(order: int, level: int) -> np.ndarray:
    """e_level in an order-N truncation (1-based level)."""
    if not 1 <= level <= order:
        msg = f"Level must be in [1, {order}], got {level}"
        raise ValueError(msg)
    state = np.zeros(order, dtype=complex)
    state[level - 1] = 1.0
    return state


def embed_state(coefficients: np.ndarray, order: int) -> np.ndarray:
    """Zero-pad (or check) a coefficient vector to length N."""
    coefficients = np.asarray(coefficients, dtype=complex)
    support = state_support(coefficients)
    if support > order:
        msg = f"State is supported on {support} levels, more than the order {order}"
        raise ValueError(msg)
    state = np.zeros(order, dtype=complex)
    state[:support] = coefficients[:support]
    return state


def state_support(coefficients: np.ndarray) -> int:
    """Number of leading levels up to the last nonzero coefficient."""
    nonzero = np.flatnonzero(np.asarray(coefficients) != 0)
    return int(nonzero[-1]) + 1 if nonzero.size else 0


def sampled_control(u: Callable[[float], float], horizon: float, dt: float) -> PiecewiseConstantControl:
    """Zero-order hold of u by midpoint sampling at step dt; the last step may be shorter."""
    if not dt > 0:
        msg = f"Step must be positive, got {dt}"
        raise ValueError(msg)
    if horizon < 0:
        msg = f"Horizon must be nonnegative, got {horizon}"
        raise ValueError(msg)
    if horizon == 0:
        return PiecewiseConstantControl.empty()
    steps = max(1, math.ceil(horizon / dt - 1e-9))
    breakpoints = np.minimum(dt * np.arange(steps + 1), horizon)
    breakpoints[-1] = horizon
    midpoints = 0.5 * (breakpoints[:-1] + breakpoints[1:])
    values = [float(u(float(t))) for t in midpoints]
    return PiecewiseConstantControl(breakpoints=tuple(breakpoints.tolist()), values=tuple(values))


def propagate(
    compression: Compression,
    control: PiecewiseConstantControl,
    psi0: np.ndarray,
    sample_dt: Optional[float] = None,
) -> Trajectory:
    """Propagate with a fresh per-run cache."""
    return GalerkinPropagator(compression).propagate(control, psi0, sample_dt)


def propagate_sampled(
    compression: Compression,
    u: Callable[[float], float],
    horizon: float,
    dt: float,
    psi0: np.ndarray,
    sample_dt: Optional[float] = None,
) -> Trajectory:
    """Midpoint zero-order hold of a smooth control, then ``propagate``.

    The sampled control, and hence its L¹ norm, travels with the trajectory.
    """
    control = sampled_control(u, horizon, dt)
    trajectory = propagate(compression, control, psi0, sample_dt)
    logger.debug(f"Sampled control - horizon: {horizon}, dt: {dt}, l1: {trajectory.control_l1:.6g}")
    return trajectory


def propagator_matrix(compression: Compression, control: PiecewiseConstantControl) -> np.ndarray:
    """Product of segment exponentials for one control."""
    return GalerkinPropagator(compression).propagator_matrix(control)


def propagator_matrix_from_segments(compression: Compression, segments: Sequence[tuple[float, float]]) -> np.ndarray:
    """Product of exp(dt·(A^(N) + uB^(N))) over (u, dt) pairs; dt may be negative."""
    return GalerkinPropagator(compression).propagator_matrix_from_segments(segments)


def segment_exponential(compression: Compression, u: float, dt: float) -> np.ndarray:
    """exp(dt·(A^(N) + uB^(N)))."""
    return GalerkinPropagator(compression).segment_exponential(u, dt)


def terminal_state(compression: Compression, control: PiecewiseConstantControl, psi0: np.ndarray) -> np.ndarray:
    """x(T) for one control."""
    return GalerkinPropagator(compression).terminal_state(control, psi0)
