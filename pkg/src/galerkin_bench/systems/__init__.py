"""Benchmark systems, their oracles, and the spectral data file plugin point."""

from .catalog import (
    coupling_norm_column,
    even_oscillator_energies,
    make_anharmonic,
    make_harmonic,
    make_planar_rotor,
    make_square_well,
)
from .datafile import SpectralDataFile, load_spectral_data, system_from_data, system_to_data
from .registry import available_systems, is_anharmonic, system_from_name

__all__ = [
    "make_square_well",
    "make_harmonic",
    "make_planar_rotor",
    "make_anharmonic",
    "coupling_norm_column",
    "even_oscillator_energies",
    "SpectralDataFile",
    "load_spectral_data",
    "system_from_data",
    "system_to_data",
    "available_systems",
    "is_anharmonic",
    "system_from_name",
]
