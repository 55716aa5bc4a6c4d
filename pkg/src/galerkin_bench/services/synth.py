"""Resonant pulse synthesis from the efficiency functional.

A periodic pulse u* tuned to (j, k) has period T = 2π/|λ_j - λ_k|. Its
efficiency is |∫_0^T u*(τ)e^{iωτ}dτ| / ∫_0^T |u*(τ)|dτ. Designs are rendered
to piecewise constant controls and their repetition count is calibrated on
the two-level model spanned by φ_j and φ_k.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from typing import Any, Literal, Optional

import numpy as np
from scipy import integrate

from galerkin_bench.effects import ErrorDetails, Failure, Result, Success
from galerkin_bench.models import (
    Collision,
    LadderSchedule,
    PeriodicPulse,
    PiecewiseConstantControl,
    ScalingExperiment,
    ScalingRow,
    SpectralSystem,
    TransferDesign,
    Transition,
    Waveform,
)

from .galerkin import compress, compress_levels
from .propagator import GalerkinPropagator, basis_state

logger = logging.getLogger(__name__)

DEFAULT_STEPS_PER_PERIOD = 128
COUPLING_TOLERANCE = 1e-14
HARMONIC_TOLERANCE = 1e-9
MONOTONE_NOISE = 1e-3
L1_BOUND_FACTOR = 5.0 * math.pi / 4.0


def _phase_integral(x: float, a: float, b: float) -> complex:
    """∫_a^b e^{ixt} dt."""
    if abs(x) * max(abs(a), abs(b), 1.0) < 1e-14:
        return complex(b - a)
    return complex((np.exp(1j * x * b) - np.exp(1j * x * a)) / (1j * x))


def _shape_breakpoints(pulse: PeriodicPulse) -> np.ndarray:
    """Times in [0, T] where the unit shape of a piecewise constant waveform may jump."""
    period = pulse.period
    if pulse.waveform is Waveform.SQUARE:
        angles = math.pi / 2.0 + math.pi * np.arange(4)
    else:
        cells = len(pulse.table)
        angles = 2.0 * math.pi * np.arange(cells) / cells
    angles = np.concatenate([angles - 2.0 * math.pi, angles, angles + 2.0 * math.pi])
    times = (angles - pulse.phase % (2.0 * math.pi)) / pulse.frequency
    inner = times[(times > 0.0) & (times < period)]
    return np.unique(np.concatenate([[0.0], inner, [period]]))


def efficiency(
    pulse: PeriodicPulse, omega: Optional[float] = None, method: Literal["exact", "quadrature"] = "exact"
) -> float:
    """Efficiency of one period of the pulse at frequency omega (default: its own).

    Exact evaluation is closed form for the cosine and segment-wise for the
    piecewise constant shapes; ``method="quadrature"`` integrates with
    ``scipy.integrate.quad`` instead.

    Raises:
        ValueError: If the pulse vanishes almost everywhere
    """
    omega = pulse.frequency if omega is None else float(omega)
    period = pulse.period
    if method == "quadrature":
        numerator, denominator = _quadrature_moments(pulse, omega)
    elif pulse.waveform is Waveform.COSINE:
        nu, phi = pulse.frequency, pulse.phase
        numerator = 0.5 * pulse.amplitude * abs(
            np.exp(1j * phi) * _phase_integral(omega + nu, 0.0, period)
            + np.exp(-1j * phi) * _phase_integral(omega - nu, 0.0, period)
        )
        denominator = pulse.amplitude * 2.0 * period / math.pi
    else:
        edges = _shape_breakpoints(pulse)
        values = pulse.value(0.5 * (edges[:-1] + edges[1:]))
        numerator = abs(sum(v * _phase_integral(omega, a, b) for v, a, b in zip(values, edges[:-1], edges[1:])))
        denominator = float(np.sum(np.abs(values) * np.diff(edges)))
    if not denominator > 0:
        msg = "Efficiency is undefined for a pulse that vanishes almost everywhere"
        raise ValueError(msg)
    return float(min(numerator / denominator, 1.0))


def _quadrature_moments(pulse: PeriodicPulse, omega: float) -> tuple[float, float]:
    period = pulse.period
    points = None if pulse.waveform is Waveform.COSINE else _shape_breakpoints(pulse)[1:-1].tolist()

    def u(t: float) -> float:
        return float(pulse.value(np.asarray(t)))

    options: dict[str, Any] = {"limit": 400, "epsabs": 1e-12, "epsrel": 1e-10, "points": points}
    re, _ = integrate.quad(lambda t: u(t) * math.cos(omega * t), 0.0, period, **options)
    im, _ = integrate.quad(lambda t: u(t) * math.sin(omega * t), 0.0, period, **options)
    total, _ = integrate.quad(lambda t: abs(u(t)), 0.0, period, **options)
    return math.hypot(re, im), total


def control_efficiency(control: PiecewiseConstantControl, omega: float) -> float:
    """Efficiency of a piecewise constant control over its own horizon."""
    edges = np.asarray(control.breakpoints)
    numerator = abs(sum(v * _phase_integral(omega, a, b) for v, a, b in zip(control.values, edges[:-1], edges[1:])))
    denominator = control.l1_norm()
    if not denominator > 0:
        msg = "Efficiency is undefined for a control that vanishes almost everywhere"
        raise ValueError(msg)
    return float(numerator / denominator)


def fourier_coefficient(control: PiecewiseConstantControl, omega: float) -> complex:
    """(1/T)∫_0^T u(t)e^{iωt}dt over the control's horizon."""
    edges = np.asarray(control.breakpoints)
    total = sum(v * _phase_integral(omega, a, b) for v, a, b in zip(control.values, edges[:-1], edges[1:]))
    return complex(total) / control.horizon


def render_pulse(
    pulse: PeriodicPulse, steps_per_period: int = DEFAULT_STEPS_PER_PERIOD, horizon: Optional[float] = None
) -> PiecewiseConstantControl:
    """Midpoint-sampled piecewise constant rendering of a pulse.

    One period is sampled once and tiled, so every period carries bitwise
    identical values. Without a horizon the pulse covers its repetitions;
    with one it is rendered up to that time, the last step clipped.
    """
    if steps_per_period < 1:
        msg = f"steps_per_period must be positive, got {steps_per_period}"
        raise ValueError(msg)
    period = pulse.period
    step = period / steps_per_period
    one_period = pulse.value(step * (np.arange(steps_per_period) + 0.5))
    end = pulse.duration if horizon is None else float(horizon)
    if end < 0:
        msg = f"Horizon must be nonnegative, got {end}"
        raise ValueError(msg)
    if end == 0:
        return PiecewiseConstantControl.empty()
    count = max(1, math.ceil(end / step - 1e-9))
    breakpoints = step * np.arange(count + 1)
    breakpoints[-1] = end
    if count > 1 and breakpoints[-2] >= end:
        breakpoints = np.delete(breakpoints, -2)
        count -= 1
    values = np.resize(one_period, count)
    return PiecewiseConstantControl(breakpoints=tuple(breakpoints.tolist()), values=tuple(values.tolist()))


def resonance_collisions(
    system: SpectralSystem, transition: Transition, depth: int, tol: float = HARMONIC_TOLERANCE
) -> list[Collision]:
    """Coupled pairs l < m <= depth whose gap is an integer multiple of |λ_j - λ_k|.

    The comparison is relative: |gap - h·ω| <= tol·h·ω. The pair {j, k} itself
    is excluded. A finite scan certifies nothing beyond ``depth``.

    Raises:
        ValueError: If λ_j = λ_k
    """
    j, k = transition
    omega = system.gap(j, k)
    if omega == 0:
        msg = f"Transition {transition} has zero frequency"
        raise ValueError(msg)
    idx = np.arange(1, depth + 1)
    lam = system.eigenvalues_at(idx)
    coupled = np.abs(system.coupling_block(idx)) > COUPLING_TOLERANCE
    gaps = np.abs(lam[:, None] - lam[None, :])
    harmonics = np.rint(gaps / omega)
    hits = np.triu(coupled & (harmonics >= 1) & (np.abs(gaps - harmonics * omega) <= tol * harmonics * omega), k=1)
    excluded = {min(j, k), max(j, k)}
    collisions = [
        Collision(int(r) + 1, int(c) + 1, int(harmonics[r, c]), float(gaps[r, c]))
        for r, c in np.argwhere(hits)
        if {int(r) + 1, int(c) + 1} != excluded
    ]
    return sorted(collisions, key=lambda c: (c.l, c.m))


def rotating_wave_pi_time(
    system: SpectralSystem, control_period: PiecewiseConstantControl, transition: Transition
) -> float:
    """First-order π time π/(2·|b_jk|·|F|) with F the resonant Fourier coefficient of one rendered period."""
    j, k = transition
    coefficient = abs(fourier_coefficient(control_period, system.gap(j, k)))
    coupling = abs(system.coupling(j, k))
    if coefficient == 0 or coupling == 0:
        return math.inf
    return math.pi / (2.0 * coupling * coefficient)


def _calibrate_repetitions(
    system: SpectralSystem, transition: Transition, period_control: PiecewiseConstantControl, estimate: float
) -> tuple[int, float]:
    """Repetition count maximizing the target population of the exact two-level run."""
    j, k = transition
    two_level = GalerkinPropagator(compress_levels(system, (j, k)))
    one_period = two_level.propagator_matrix(period_control)
    state = basis_state(2, 1)
    best, best_population = 1, -1.0
    for r in range(1, math.ceil(1.5 * estimate) + 3):
        state = one_period @ state
        population = float(abs(state[1]) ** 2)
        if population > best_population:
            best, best_population = r, population
    return best, best_population


def design_transfer(
    system: SpectralSystem,
    transition: Transition,
    amplitude: float,
    waveform: Waveform = Waveform.COSINE,
    *,
    phase: float = 0.0,
    table: Sequence[float] = (),
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
    collision_depth: Optional[int] = None,
    collision_tol: float = HARMONIC_TOLERANCE,
) -> Result[ErrorDetails, TransferDesign]:
    """Design a resonant transfer from φ_j to φ_k.

    Args:
        system: The system to drive
        transition: (j, k), population moves from j to k
        amplitude: Pulse amplitude > 0
        waveform: Shape of one period
        phase: Phase offset of the shape
        table: One period of values for tabulated waveforms
        steps_per_period: Rendering resolution
        collision_depth: Scan depth for resonance collisions (default max(j, k) + 8)
        collision_tol: Relative harmonic tolerance

    Returns:
        Success with the design, or Failure(NO_TRANSFER) when b_jk = 0

    Raises:
        ValueError: For a non-positive amplitude or a control outside U
    """
    j, k = transition
    if not amplitude > 0:
        msg = f"Amplitude must be positive, got {amplitude}"
        raise ValueError(msg)
    if j == k:
        msg = "A transition needs two distinct levels"
        raise ValueError(msg)
    coupling = abs(system.coupling(j, k))
    omega = system.gap(j, k)
    if coupling <= COUPLING_TOLERANCE or omega == 0:
        logger.warning(f"No transfer possible - system: {system.name}, transition: {transition}, |b|: {coupling}")
        return Failure(
            ErrorDetails(
                "NO_TRANSFER",
                f"Levels {j} and {k} are not coupled" if coupling <= COUPLING_TOLERANCE else "Zero transition frequency",
                {"transition": [j, k], "coupling": coupling, "gap": omega},
            )
        )

    pulse = PeriodicPulse(waveform, (j, k), omega, amplitude, 1, phase, tuple(table))
    period_control = render_pulse(pulse, steps_per_period)
    if not period_control.within(system.control_set):
        msg = f"Pulse amplitude {amplitude} leaves the control set of {system.name}"
        raise ValueError(msg)
    pi_time = rotating_wave_pi_time(system, period_control, transition)
    if not math.isfinite(pi_time):
        return Failure(
            ErrorDetails(
                "NO_TRANSFER",
                f"Waveform {waveform.value} has no component at the transition frequency",
                {"transition": [j, k], "gap": omega},
            )
        )
    repetitions, fidelity = _calibrate_repetitions(system, transition, period_control, pi_time / pulse.period)
    pulse = pulse.with_repetitions(repetitions)
    control = render_pulse(pulse, steps_per_period)

    depth = collision_depth if collision_depth is not None else max(j, k) + 8
    if system.max_level is not None:
        depth = min(depth, system.max_level)
    collisions = tuple(resonance_collisions(system, transition, depth, collision_tol))
    # Rendering aliases the shape onto harmonics m·steps_per_period ± 1, so test the rendered period.
    warnings = tuple(
        f"pair ({c.l}, {c.m}) resonates with harmonic {c.harmonic}"
        for c in collisions
        if control_efficiency(period_control, c.harmonic * omega) > HARMONIC_TOLERANCE
    )
    for message in warnings:
        logger.warning(f"Resonance collision - system: {system.name}, transition: {transition}, {message}")

    design = TransferDesign(
        pulse=pulse,
        control=control,
        predicted_fidelity=fidelity,
        pi_time=pi_time,
        efficiency=control_efficiency(period_control, omega),
        steps_per_period=steps_per_period,
        collisions=collisions,
        warnings=warnings,
    )
    logger.info(
        f"Designed transfer - system: {system.name}, transition: {transition}, repetitions: {repetitions}, "
        f"l1: {design.l1_norm:.6g}, predicted_fidelity: {fidelity:.6f}"
    )
    return Success(design)


def ladder_l1_bound(system: SpectralSystem, top_level: int) -> float:
    """(5π/4)·Σ_{j<m} |b_{j,j+1}|^{-1}."""
    return L1_BOUND_FACTOR * sum(1.0 / abs(system.coupling(j, j + 1)) for j in range(1, top_level))


def ladder_schedule(
    system: SpectralSystem,
    top_level: int,
    amplitude: float,
    waveform: Waveform = Waveform.COSINE,
    *,
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
    collision_depth: Optional[int] = None,
) -> Result[ErrorDetails, LadderSchedule]:
    """Concatenated transfers (1, 2), (2, 3), ..., (m - 1, m).

    Returns:
        Success with the schedule, or Failure(BROKEN_CHAIN) naming the first zero link
    """
    if top_level < 2:
        msg = f"Top level must be at least 2, got {top_level}"
        raise ValueError(msg)
    for j in range(1, top_level):
        if abs(system.coupling(j, j + 1)) <= COUPLING_TOLERANCE:
            logger.warning(f"Broken ladder - system: {system.name}, link: ({j}, {j + 1})")
            return Failure(
                ErrorDetails("BROKEN_CHAIN", f"Chain link ({j}, {j + 1}) has zero coupling", {"link": [j, j + 1]})
            )

    legs: list[TransferDesign] = []
    for j in range(1, top_level):
        result = design_transfer(
            system,
            (j, j + 1),
            amplitude,
            waveform,
            steps_per_period=steps_per_period,
            collision_depth=collision_depth,
        )
        if isinstance(result, Failure):
            return Failure(result.error)
        legs.append(result.value)

    control = PiecewiseConstantControl.empty()
    cumulative: list[float] = []
    for leg in legs:
        control = control.concatenate(leg.control)
        cumulative.append((cumulative[-1] if cumulative else 0.0) + leg.l1_norm)
    schedule = LadderSchedule(
        legs=tuple(legs),
        control=control,
        cumulative_l1=tuple(cumulative),
        l1_bound=ladder_l1_bound(system, top_level),
    )
    logger.info(
        f"Ladder schedule - system: {system.name}, top_level: {top_level}, total_l1: {schedule.total_l1:.6g}, "
        f"bound: {schedule.l1_bound:.6g}"
    )
    return Success(schedule)


def amplitude_scaling_experiment(
    system: SpectralSystem,
    transition: Transition,
    waveform: Waveform,
    n_list: Sequence[int],
    base_amplitude: float,
    order: int,
    *,
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
    noise: float = MONOTONE_NOISE,
) -> Result[ErrorDetails, ScalingExperiment]:
    """Run u*/n over n·T* for each n and record |<φ_k, x(nT*)>|.

    T* comes from the design at amplitude base/n_max, so that run lasts
    exactly the calibrated number of periods.

    Returns:
        Success with the experiment table, or the design Failure
    """
    if not n_list:
        return Success(ScalingExperiment(rows=(), base_horizon=0.0, monotone=True))
    if any(n < 1 for n in n_list):
        msg = "Every n must be a positive integer"
        raise ValueError(msg)
    j, k = transition
    n_max = max(n_list)
    reference = design_transfer(
        system, transition, base_amplitude / n_max, waveform, steps_per_period=steps_per_period
    )
    if isinstance(reference, Failure):
        return Failure(reference.error)
    base_horizon = reference.value.duration / n_max
    propagator = GalerkinPropagator(compress(system, order))
    psi0 = basis_state(order, j)

    rows: list[ScalingRow] = []
    for n in n_list:
        pulse = reference.value.pulse.with_amplitude(base_amplitude / n)
        control = render_pulse(pulse, steps_per_period, horizon=n * base_horizon)
        state = propagator.terminal_state(control, psi0)
        rows.append(ScalingRow(n, pulse.amplitude, control.horizon, float(abs(state[k - 1])), control.l1_norm()))
        logger.debug(f"Scaling run - n: {n}, fidelity: {rows[-1].fidelity:.6f}")

    fidelities = [row.fidelity for row in rows]
    monotone = all(b >= a - noise for a, b in zip(fidelities, fidelities[1:]))
    return Success(
        ScalingExperiment(
            rows=tuple(rows),
            base_horizon=base_horizon,
            monotone=monotone,
            collisions=reference.value.collisions,
        )
    )
