"""Spectral-Galerkin simulation and resonant control synthesis for bilinear quantum systems.

dψ/dt = (A + u(t)B)ψ with A diagonal in its eigenbasis; every system is given
by its spectral data (λ_k, b_jk) only.
"""

__version__ = "0.1.0"

from .models import PiecewiseConstantControl, SpectralSystem, Trajectory
from .services import compress, design_transfer, harmonic_truncation_order, propagate
from .systems import make_anharmonic, make_harmonic, make_planar_rotor, make_square_well, system_from_name

__all__ = [
    "SpectralSystem",
    "PiecewiseConstantControl",
    "Trajectory",
    "make_square_well",
    "make_harmonic",
    "make_planar_rotor",
    "make_anharmonic",
    "system_from_name",
    "compress",
    "propagate",
    "design_transfer",
    "harmonic_truncation_order",
]
