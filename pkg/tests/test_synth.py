"""Tests for resonant pulse synthesis."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from galerkin_bench.effects import Failure, Success
from galerkin_bench.models import PeriodicPulse, SpectralSystem, Verdict, Waveform
from galerkin_bench.services import (
    amplitude_scaling_experiment,
    basis_state,
    check_l1_lower_bound,
    check_norm_growth,
    compress,
    design_transfer,
    efficiency,
    empirical_truncation_order,
    ladder_l1_bound,
    ladder_schedule,
    propagate,
    render_pulse,
    required_order_for_target,
    resonance_collisions,
    rotating_wave_pi_time,
    terminal_state,
)
from galerkin_bench.services.synth import DEFAULT_STEPS_PER_PERIOD, control_efficiency, fourier_coefficient
from galerkin_bench.systems import system_from_data


def unit_pulse(waveform: Waveform, phase: float = 0.0, table: tuple[float, ...] = ()) -> PeriodicPulse:
    """Pulse of amplitude 1 at frequency 1.5, the square-well (1, 2) transition."""
    return PeriodicPulse(waveform, (1, 2), 1.5, 1.0, 1, phase, table)


# Tests for the efficiency functional
def test_cosine_efficiency_is_pi_over_four() -> None:
    """Test Eff(cos) = π/4 at its own frequency."""
    assert efficiency(unit_pulse(Waveform.COSINE)) == pytest.approx(math.pi / 4.0, abs=1e-12)


def test_square_efficiency_is_two_over_pi() -> None:
    """Test Eff(sign(cos)) = 2/π at its own frequency."""
    assert efficiency(unit_pulse(Waveform.SQUARE)) == pytest.approx(2.0 / math.pi, abs=1e-12)


def test_square_wave_harmonics() -> None:
    """Test that the square wave drives odd harmonics only."""
    pulse = unit_pulse(Waveform.SQUARE)
    assert efficiency(pulse, 2 * 1.5) == pytest.approx(0.0, abs=1e-12)
    assert efficiency(pulse, 3 * 1.5) == pytest.approx(2.0 / (3.0 * math.pi), abs=1e-12)


def test_cosine_has_no_higher_harmonics() -> None:
    """Test Eff(cos) = 0 at integer harmonics above the first."""
    pulse = unit_pulse(Waveform.COSINE)
    for harmonic in (2, 3, 5):
        assert efficiency(pulse, harmonic * 1.5) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("scale", [0.1, 1.0, 10.0])
@pytest.mark.parametrize("waveform", [Waveform.COSINE, Waveform.SQUARE])
def test_efficiency_is_scale_invariant(scale: float, waveform: Waveform) -> None:
    """Test Eff(c·u*) = Eff(u*) for c > 0."""
    pulse = unit_pulse(waveform, phase=0.3)
    assert efficiency(pulse.with_amplitude(scale)) == pytest.approx(efficiency(pulse), abs=1e-12)


@pytest.mark.parametrize("waveform", [Waveform.COSINE, Waveform.SQUARE, Waveform.TABULATED])
@pytest.mark.parametrize("omega", [1.5, 2.2, 4.5])
def test_exact_efficiency_matches_quadrature(waveform: Waveform, omega: float) -> None:
    """Test the closed-form and segment-wise evaluations against adaptive quadrature."""
    pulse = unit_pulse(waveform, phase=0.7, table=(1.0, -0.5, 0.25, -1.0))
    exact = efficiency(pulse, omega)
    quadrature = efficiency(pulse, omega, method="quadrature")
    assert exact == pytest.approx(quadrature, abs=1e-8)


@given(
    phase=st.floats(min_value=-math.pi, max_value=math.pi),
    omega=st.floats(min_value=0.1, max_value=20.0),
    table=st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=1, max_size=12),
)
@settings(max_examples=100, deadline=None)
def test_efficiency_is_a_ratio_in_unit_interval(phase: float, omega: float, table: list[float]) -> None:
    """Test 0 <= Eff <= 1 for tabulated waveforms at any frequency."""
    if not any(abs(v) > 1e-6 for v in table):
        table = [1.0]
    pulse = unit_pulse(Waveform.TABULATED, phase, tuple(table))
    assert 0.0 <= efficiency(pulse, omega) <= 1.0


@pytest.mark.parametrize("harmonic", [1, 3])
@pytest.mark.parametrize("waveform", [Waveform.COSINE, Waveform.SQUARE, Waveform.TABULATED])
def test_efficiency_is_invariant_under_time_translation(waveform: Waveform, harmonic: int) -> None:
    """Test that shifting the phase leaves Eff unchanged at integer harmonics of the pulse."""
    pulse = unit_pulse(waveform, table=(1.0, -0.5, 0.25, -1.0))
    omega = harmonic * pulse.frequency
    reference = efficiency(pulse, omega)
    for phase in np.linspace(0.0, 2.0 * math.pi, 8, endpoint=False) + 0.1:
        assert efficiency(pulse.with_phase(float(phase)), omega) == pytest.approx(reference, abs=1e-10)


def test_zero_pulse_has_no_efficiency() -> None:
    """Test that a vanishing pulse is rejected."""
    with pytest.raises(ValueError, match="vanishes"):
        efficiency(unit_pulse(Waveform.COSINE).with_amplitude(0.0))


# Tests for rendering
def test_render_tiles_identical_periods() -> None:
    """Test bitwise identical values in every period."""
    pulse = unit_pulse(Waveform.COSINE).with_repetitions(3)
    control = render_pulse(pulse, steps_per_period=16)
    assert control.segment_count == 48
    values = np.asarray(control.values).reshape(3, 16)
    assert np.array_equal(values[0], values[1])
    assert np.array_equal(values[0], values[2])
    assert control.horizon == pytest.approx(3 * pulse.period, rel=1e-12)


def test_render_clips_at_horizon() -> None:
    """Test rendering up to an arbitrary horizon."""
    pulse = unit_pulse(Waveform.SQUARE)
    step = pulse.period / 8
    control = render_pulse(pulse, steps_per_period=8, horizon=2.5 * step)
    assert control.segment_count == 3
    assert control.horizon == 2.5 * step
    assert render_pulse(pulse, horizon=0.0).segment_count == 0


def test_rendered_cosine_keeps_its_efficiency() -> None:
    """Test that a fine rendering is close to the ideal π/4."""
    period_control = render_pulse(unit_pulse(Waveform.COSINE), steps_per_period=256)
    assert control_efficiency(period_control, 1.5) == pytest.approx(math.pi / 4.0, abs=1e-4)


def test_rotating_wave_pi_time_for_cosine(square_well: SpectralSystem) -> None:
    """Test T_π ≈ π/(a·|b_12|) for a cosine."""
    period_control = render_pulse(unit_pulse(Waveform.COSINE).with_amplitude(0.01), steps_per_period=256)
    expected = math.pi / (0.01 * 4.0 / 9.0)
    assert rotating_wave_pi_time(square_well, period_control, (1, 2)) == pytest.approx(expected, rel=1e-3)
    assert abs(fourier_coefficient(period_control, 1.5)) == pytest.approx(0.005, rel=1e-3)


# Tests for resonance collisions
def test_square_well_collisions(square_well: SpectralSystem) -> None:
    """Test the harmonic collisions of the square-well (1, 2) transition."""
    collisions = resonance_collisions(square_well, (1, 2), depth=10)
    found = {(c.l, c.m): c.harmonic for c in collisions}
    assert found[4, 5] == 3
    assert found[1, 4] == 5
    assert found[7, 8] == 5
    assert (1, 2) not in found


def test_rotor_collisions(rotor: SpectralSystem) -> None:
    """Test that rotor gaps 2l + 1 hit odd harmonics of the (1, 2) frequency 3."""
    collisions = resonance_collisions(rotor, (1, 2), depth=6)
    assert [(c.l, c.m, c.harmonic) for c in collisions] == [(4, 5, 3)]


def test_square_wave_collision_warning(square_well: SpectralSystem) -> None:
    """Test that a square wave on square-well (1, 2) warns about driven collisions."""
    result = design_transfer(square_well, (1, 2), 0.01, Waveform.SQUARE)
    assert isinstance(result, Success)
    assert "pair (4, 5) resonates with harmonic 3" in result.value.warnings


def test_cosine_has_collisions_but_no_warning(square_well: SpectralSystem) -> None:
    """Test that collisions at harmonics the cosine does not drive stay silent."""
    result = design_transfer(square_well, (1, 2), 0.01)
    assert isinstance(result, Success)
    assert result.value.collisions
    assert result.value.warnings == ()


# Tests for transfer design
def test_design_transfer_on_uncoupled_pair(square_well: SpectralSystem) -> None:
    """Test NO_TRANSFER for b_13 = 0."""
    result = design_transfer(square_well, (1, 3), 0.01)
    assert isinstance(result, Failure)
    assert result.error.code == "NO_TRANSFER"
    assert result.error.details["transition"] == [1, 3]


@pytest.mark.parametrize("amplitude", [0.0, -0.1])
def test_design_transfer_rejects_non_positive_amplitude(rotor: SpectralSystem, amplitude: float) -> None:
    """Test that the amplitude must be positive."""
    with pytest.raises(ValueError, match="Amplitude must be positive"):
        design_transfer(rotor, (1, 2), amplitude)


def test_design_period_matches_transition(rotor: SpectralSystem) -> None:
    """Test period·|λ_j - λ_k| = 2π and a calibrated fidelity close to one."""
    design = design_transfer(rotor, (1, 2), 0.02).unwrap_or(None)
    assert design is not None
    assert design.pulse.period * rotor.gap(1, 2) == pytest.approx(2.0 * math.pi, abs=1e-12)
    assert design.predicted_fidelity > 0.999
    assert design.efficiency == pytest.approx(math.pi / 4.0, abs=2e-3)


def test_rotor_transfer_within_l1_budget(rotor: SpectralSystem) -> None:
    """Test rotor (1, 2) at fidelity >= 0.99 with L¹ <= 1.10·(5π/4)/(1/2), and the trajectory bounds."""
    design = design_transfer(rotor, (1, 2), 0.01).unwrap_or(None)
    assert design is not None
    assert design.l1_norm <= 1.10 * (5.0 * math.pi / 4.0) / 0.5
    trajectory = propagate(compress(rotor, 12), design.control, basis_state(12, 1))
    assert trajectory.terminal_population(2) >= 0.99
    assert check_l1_lower_bound(trajectory, rotor).verdict is Verdict.PASS
    for k in (1, 2):
        assert check_norm_growth(trajectory, rotor, k).verdict is Verdict.PASS


def test_harmonic_transfer_norm_growth(harmonic: SpectralSystem) -> None:
    """Test the norm-growth bound with c_k = 3^k - 1 on a synthesized harmonic pulse."""
    design = design_transfer(harmonic, (1, 2), 0.01).unwrap_or(None)
    assert design is not None
    assert design.warnings
    trajectory = propagate(compress(harmonic, 30), design.control, basis_state(30, 1))
    assert check_l1_lower_bound(trajectory, harmonic).verdict is Verdict.PASS
    for k in (1, 2):
        report = check_norm_growth(trajectory, harmonic, k)
        assert report.verdict is Verdict.PASS
        assert report.parameters["c_k"] == 3**k - 1


@pytest.mark.slow
def test_square_well_resonant_transfer(square_well: SpectralSystem) -> None:
    """Test square-well (1, 2) at amplitude 0.01: population >= 0.99 at N = 20, N = 10 within 1e-6 of N = 20.

    Uses the default rendering resolution.
    """
    design = design_transfer(square_well, (1, 2), 0.01).unwrap_or(None)
    assert design is not None
    assert design.steps_per_period == DEFAULT_STEPS_PER_PERIOD == 128
    assert design.warnings == ()
    trajectory = propagate(compress(square_well, 20), design.control, basis_state(20, 1))
    assert trajectory.terminal_population(2) >= 0.99
    assert check_l1_lower_bound(trajectory, square_well).verdict is Verdict.PASS
    coarse = terminal_state(compress(square_well, 10), design.control, basis_state(10, 1))
    padded = np.concatenate([coarse, np.zeros(10)])
    assert np.linalg.norm(padded - trajectory.terminal_state) < 1e-6


# Tests for the amplitude scaling experiment
@pytest.mark.slow
def test_rotor_amplitude_scaling(rotor: SpectralSystem) -> None:
    """Test a fidelity column nondecreasing within 1e-3 over n = 1, 2, 4, 8, ending above 0.999."""
    result = amplitude_scaling_experiment(rotor, (1, 2), Waveform.COSINE, [1, 2, 4, 8], 0.08, order=12)
    assert isinstance(result, Success)
    experiment = result.value
    fidelities = experiment.fidelities
    assert experiment.monotone
    assert all(b >= a - 1e-3 for a, b in zip(fidelities, fidelities[1:]))
    assert fidelities[-1] >= 0.999
    rows = experiment.rows
    assert [row.n for row in rows] == [1, 2, 4, 8]
    assert rows[-1].horizon == pytest.approx(8 * experiment.base_horizon)
    assert rows[0].l1_norm == pytest.approx(rows[-1].l1_norm, rel=0.05)


def test_amplitude_scaling_empty_grid(rotor: SpectralSystem) -> None:
    """Test that an empty n list gives an empty table."""
    result = amplitude_scaling_experiment(rotor, (1, 2), Waveform.COSINE, [], 0.08, order=4)
    assert isinstance(result, Success)
    assert result.value.rows == ()


# Tests for ladder schedules
def test_rotor_ladder(rotor: SpectralSystem) -> None:
    """Test a two-leg ladder and its L¹ bookkeeping."""
    result = ladder_schedule(rotor, 3, 0.02)
    assert isinstance(result, Success)
    schedule = result.value
    assert schedule.top_level == 3
    assert len(schedule.legs) == 2
    assert schedule.cumulative_l1[-1] == pytest.approx(schedule.total_l1)
    assert schedule.l1_bound == pytest.approx(ladder_l1_bound(rotor, 3))
    assert schedule.l1_bound == pytest.approx(5.0 * math.pi)
    assert schedule.leg_end_times()[-1] == pytest.approx(schedule.control.horizon)
    trajectory = propagate(compress(rotor, 10), schedule.control, basis_state(10, 1))
    assert trajectory.terminal_population(3) >= 0.98


def test_broken_ladder() -> None:
    """Test BROKEN_CHAIN naming the first zero link."""
    system = system_from_data({"name": "gap", "eigenvalues": [-1.0, -3.0, -6.0], "couplings": [[1, 2, 0.0, -0.5]]})
    result = ladder_schedule(system, 3, 0.1)
    assert isinstance(result, Failure)
    assert result.error.code == "BROKEN_CHAIN"
    assert result.error.details["link"] == [2, 3]


@pytest.mark.slow
def test_anharmonic_ladder_reaches_level_ten(anharmonic3: SpectralSystem) -> None:
    """Test climbing to level 10 within 1.25 times the L¹ bound, with a truncation need growing with the target."""
    result = ladder_schedule(anharmonic3, 10, 0.5)
    assert isinstance(result, Success)
    schedule = result.value
    assert schedule.total_l1 <= 1.25 * ladder_l1_bound(anharmonic3, 10)
    trajectory = propagate(compress(anharmonic3, 16), schedule.control, basis_state(16, 1))
    assert trajectory.terminal_population(10) >= 0.9
    assert check_l1_lower_bound(trajectory, anharmonic3).verdict is Verdict.PASS

    required = []
    for target in (3, 6, 10):
        ladder = ladder_schedule(anharmonic3, target, 0.5).unwrap_or(None)
        assert ladder is not None
        required.append(
            required_order_for_target(anharmonic3, ladder.control, basis_state(1, 1), target, reference_order=target + 6)
        )
    assert required == sorted(set(required))
    assert all(order >= target for order, target in zip(required, (3, 6, 10)))

    capped = empirical_truncation_order(anharmonic3, schedule.control, basis_state(1, 1), 1e-6, cap=8, start=4)
    assert isinstance(capped, Failure)
    assert capped.error.code == "TRUNCATION_CAP_EXCEEDED"
