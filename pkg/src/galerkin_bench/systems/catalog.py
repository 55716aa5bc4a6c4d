"""The four benchmark systems, defined by closed-form spectral data.

Every system follows B = -i·V with V the Hermitian coupling potential, so
that i(A + uB) = diag(μ) + u·V.
"""

from __future__ import annotations

import logging
import math
from functools import partial

import numpy as np

from galerkin_bench.models import SpectralSystem, SystemName

from .hermite import quartic_elements

logger = logging.getLogger(__name__)

ANHARMONIC_FREQUENCY = math.sqrt(2.0)


def _square_well_magnitudes(k: np.ndarray) -> np.ndarray:
    return k.astype(float) ** 2 / 2.0


def _square_well_couplings(j: np.ndarray, k: np.ndarray) -> np.ndarray:
    jf, kf = j.astype(float), k.astype(float)
    odd = np.mod(j - k, 2) == 1
    denom = np.where(odd, (jf**2 - kf**2) ** 2, 1.0)
    sign = np.where(np.mod(j + k, 2) == 0, 1.0, -1.0)
    table = np.where(odd, sign * 2.0 * jf * kf / denom, 0.0)
    return -1j * table


def _harmonic_magnitudes(n: np.ndarray) -> np.ndarray:
    return n.astype(float) - 0.5


def _harmonic_couplings(j: np.ndarray, k: np.ndarray) -> np.ndarray:
    adjacent = np.abs(j - k) == 1
    return np.where(adjacent, -1j * np.sqrt(np.maximum(j, k).astype(float) / 2.0), 0.0)


def _harmonic_bound(k: int) -> float:
    return float(3**k - 1)


def _rotor_magnitudes(k: np.ndarray) -> np.ndarray:
    return k.astype(float) ** 2


def _rotor_couplings(j: np.ndarray, k: np.ndarray) -> np.ndarray:
    return np.where(np.abs(j - k) == 1, -0.5j, 0.0)


def _rotor_bound(k: int) -> float:
    return (2.0 ** (2 * k) - 1.0) / 2.0


def even_oscillator_energies(n: np.ndarray) -> np.ndarray:
    """μ_n of -Δ/2 + x² on even functions: sqrt(2)·(2(n-1) + 1/2)."""
    m = 2.0 * (np.asarray(n, dtype=float) - 1.0)
    return ANHARMONIC_FREQUENCY * (m + 0.5)


def _anharmonic_magnitudes(n: np.ndarray, alpha: int) -> np.ndarray:
    mu = even_oscillator_energies(n)
    return mu**alpha + 1.0 / mu


def _anharmonic_couplings(j: np.ndarray, k: np.ndarray) -> np.ndarray:
    # x = (a + a†)/sqrt(2ω) with ω² = 2, hence x⁴ = (a + a†)⁴/8
    return -1j * quartic_elements(2 * (j - 1), 2 * (k - 1)) / 8.0


def make_square_well() -> SpectralSystem:
    """Particle in the box (0, π) driven by the dipole x.

    λ_k = -k²/2 and V_jk = (-1)^{j+k}·2jk/(j² - k²)² for j - k odd, 0 otherwise.
    """
    return SpectralSystem(
        name=SystemName("square-well"),
        magnitudes=_square_well_magnitudes,
        couplings=_square_well_couplings,
        bandwidth=None,
        math_note=(
            "Diagonal dipole elements (π/2 on (0, π)) are set to 0; a constant diagonal only adds a global phase. "
            "Tabulated elements equal π/4 times the dipole elements of the normalized sqrt(2/π)·sin(kx)."
        ),
    )


def make_harmonic() -> SpectralSystem:
    """Harmonic oscillator driven by the position operator (tridiagonal coupling)."""
    return SpectralSystem(
        name=SystemName("harmonic"),
        magnitudes=_harmonic_magnitudes,
        couplings=_harmonic_couplings,
        known_coupling_bound=_harmonic_bound,
        bandwidth=1,
        math_note=(
            "λ_n = -(n - 1/2) labels level n by Hermite index n - 1, while the coupling table "
            "matches Hermite index n; the table is taken as the definition."
        ),
    )


def make_planar_rotor() -> SpectralSystem:
    """Rigid bipolar molecule rotating in a plane, odd sector sin(kθ)/sqrt(π)."""
    return SpectralSystem(
        name=SystemName("planar-rotor"),
        magnitudes=_rotor_magnitudes,
        couplings=_rotor_couplings,
        known_coupling_bound=_rotor_bound,
        b_operator_norm=1.0,
        bandwidth=1,
        math_note="B = -i·cos θ, bounded with operator norm 1.",
    )


def make_anharmonic(alpha: int) -> SpectralSystem:
    """Strongly perturbed harmonic oscillator on the even subspace.

    Level n is the even Hermite function of index 2(n - 1) for -Δ/2 + x²,
    λ_n = -(μ_n^alpha + 1/μ_n) and V = x⁴, banded with |j - k| <= 2.

    Args:
        alpha: Positive integer exponent

    Raises:
        ValueError: If alpha < 1
    """
    if isinstance(alpha, bool) or not isinstance(alpha, int) or alpha < 1:
        logger.error(f"Invalid anharmonic exponent - alpha: {alpha}")
        msg = f"alpha must be a positive integer, got {alpha!r}"
        raise ValueError(msg)
    return SpectralSystem(
        name=SystemName(f"anharmonic(alpha={alpha})"),
        magnitudes=partial(_anharmonic_magnitudes, alpha=alpha),
        couplings=_anharmonic_couplings,
        bandwidth=2,
        parameters={"alpha": alpha},
        math_note="|b_{j,j+1}| grows like 2j², so Σ|b_{j,j+1}|^{-1} converges.",
    )


def coupling_norm_column(system: SpectralSystem, n: int, order: int) -> float:
    """Truncated ||Bφ_n|| = sqrt(Σ_{j<=N} |b_jn|²).

    Raises:
        ValueError: Unless 1 <= n <= order
    """
    if not 1 <= n <= order:
        msg = f"Column index must be in [1, {order}], got {n}"
        raise ValueError(msg)
    if system.max_level is not None and order > system.max_level:
        msg = f"System {system.name} only provides levels up to {system.max_level}"
        raise ValueError(msg)
    rows = np.arange(1, order + 1, dtype=np.int64)
    column = np.asarray(system.couplings(rows, np.full_like(rows, n)), dtype=complex)
    return float(np.linalg.norm(column))
