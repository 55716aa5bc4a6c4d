"""Services package: compression, propagation, synthesis and diagnostics."""

from galerkin_bench.services.diagnostics import (
    check_energy_variation,
    check_l1_lower_bound,
    check_norm_growth,
    find_nondegenerate_chain,
    summarize_reports,
    transition_graph,
)
from galerkin_bench.services.galerkin import (
    compress,
    compress_levels,
    empirical_truncation_order,
    harmonic_truncation_bound,
    harmonic_truncation_order,
    required_order_for_target,
    truncation_sweep,
)
from galerkin_bench.services.propagator import (
    GalerkinPropagator,
    basis_state,
    embed_state,
    propagate,
    propagate_sampled,
    propagator_matrix,
    propagator_matrix_from_segments,
    sampled_control,
    segment_exponential,
    terminal_state,
)
from galerkin_bench.services.synth import (
    amplitude_scaling_experiment,
    design_transfer,
    efficiency,
    ladder_l1_bound,
    ladder_schedule,
    render_pulse,
    resonance_collisions,
    rotating_wave_pi_time,
)

__all__ = [
    # Galerkin compressions and truncation orders
    "compress",
    "compress_levels",
    "harmonic_truncation_bound",
    "harmonic_truncation_order",
    "empirical_truncation_order",
    "truncation_sweep",
    "required_order_for_target",
    # Propagation
    "GalerkinPropagator",
    "basis_state",
    "embed_state",
    "propagate",
    "propagate_sampled",
    "propagator_matrix",
    "propagator_matrix_from_segments",
    "sampled_control",
    "segment_exponential",
    "terminal_state",
    # Synthesis
    "efficiency",
    "render_pulse",
    "resonance_collisions",
    "rotating_wave_pi_time",
    "design_transfer",
    "ladder_l1_bound",
    "ladder_schedule",
    "amplitude_scaling_experiment",
    # Diagnostics
    "transition_graph",
    "find_nondegenerate_chain",
    "check_norm_growth",
    "check_l1_lower_bound",
    "check_energy_variation",
    "summarize_reports",
]
