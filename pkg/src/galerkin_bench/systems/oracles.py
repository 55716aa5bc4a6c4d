"""Quadrature oracles for the benchmark coupling tables.

Each oracle integrates the coupling potential V against explicit
eigenfunctions, independently of the closed forms in ``catalog``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.legendre import leggauss

from galerkin_bench.models import SpectralSystem

from .hermite import hermite_polynomial_parts

logger = logging.getLogger(__name__)


def _legendre_on(a: float, b: float, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    t, w = leggauss(nodes)
    half = 0.5 * (b - a)
    return a + half * (t + 1.0), half * w


def square_well_dipole(levels: int, nodes: int = 256) -> np.ndarray:
    """<φ_j, x φ_k> on (0, π) with φ_k = sqrt(2/π)·sin(kx), diagonal included."""
    x, w = _legendre_on(0.0, math.pi, nodes)
    k = np.arange(1, levels + 1)[:, None]
    basis = math.sqrt(2.0 / math.pi) * np.sin(k * x[None, :])
    return (basis * (w * x)[None, :]) @ basis.T


def harmonic_position(levels: int, index_offset: int = 1, nodes: int = 128) -> np.ndarray:
    """<h_p, x h_q> for Hermite indices p = j - 1 + index_offset, q = k - 1 + index_offset."""
    y, w = hermgauss(nodes)
    top = levels - 1 + index_offset
    parts = hermite_polynomial_parts(top, y)[index_offset : top + 1]
    return (parts * (w * y)[None, :]) @ parts.T


def planar_rotor_cosine(levels: int, nodes: int = 256) -> np.ndarray:
    """(1/π)∫_0^{2π} sin(jθ)·cos θ·sin(kθ) dθ."""
    theta, w = _legendre_on(0.0, 2.0 * math.pi, nodes)
    k = np.arange(1, levels + 1)[:, None]
    basis = np.sin(k * theta[None, :]) / math.sqrt(math.pi)
    return (basis * (w * np.cos(theta))[None, :]) @ basis.T


def even_oscillator_quartic(levels: int, nodes: int = 128) -> np.ndarray:
    """<ψ_{2(j-1)}, x⁴ ψ_{2(k-1)}> for the eigenfunctions of -Δ/2 + x².

    With ψ_m(x) = ω^{1/4}·h_m(sqrt(ω)·x) and ω² = 2 the integral reduces to
    (1/2)∫ h_m(y)·y⁴·h_m'(y) dy.
    """
    y, w = hermgauss(nodes)
    parts = hermite_polynomial_parts(2 * (levels - 1), y)[::2]
    return 0.5 * (parts * (w * y**4)[None, :]) @ parts.T


@dataclass(frozen=True)
class OracleComparison:
    """Agreement between a closed-form coupling table and its quadrature oracle.

    Attributes:
        system: System name
        levels: Levels compared (1..levels)
        max_abs_error: max |V_table - scale·V_oracle| over compared entries
        scale: Fitted positive scale (1.0 unless fitted)
        index_offset: Hermite index offset used by the harmonic oracle
        excluded: Entries left out of the comparison, with the reason
    """

    system: str
    levels: int
    max_abs_error: float
    scale: float = 1.0
    index_offset: int = 0
    excluded: str = ""


def potential_table(system: SpectralSystem, levels: int) -> np.ndarray:
    """Closed-form V = i·b on levels 1..levels."""
    return 1j * system.coupling_block(np.arange(1, levels + 1))


def compare_with_oracle(system: SpectralSystem, levels: int) -> OracleComparison:
    """Compare a benchmark system's coupling table with its quadrature oracle.

    Raises:
        ValueError: For systems without an oracle (data-file systems)
    """
    table = potential_table(system, levels)
    base = system.name.split("(")[0]
    if base == "square-well":
        oracle = square_well_dipole(levels)
        scale = float(table[0, 1].real / oracle[0, 1]) if levels >= 2 else 1.0
        off = ~np.eye(levels, dtype=bool)
        error = float(np.max(np.abs(table - scale * oracle)[off])) if levels >= 2 else 0.0
        result = OracleComparison(
            system.name, levels, error, scale=scale, excluded="diagonal: the table sets b_kk = 0, the dipole gives π/2"
        )
    elif base == "harmonic":
        errors = {offset: float(np.max(np.abs(table - harmonic_position(levels, offset)))) for offset in (0, 1)}
        offset = min(errors, key=lambda o: errors[o])
        result = OracleComparison(system.name, levels, errors[offset], index_offset=offset)
    elif base == "planar-rotor":
        result = OracleComparison(system.name, levels, float(np.max(np.abs(table - planar_rotor_cosine(levels)))))
    elif base == "anharmonic":
        result = OracleComparison(system.name, levels, float(np.max(np.abs(table - even_oscillator_quartic(levels)))))
    else:
        msg = f"No quadrature oracle for system {system.name}"
        raise ValueError(msg)
    logger.info(
        f"Oracle comparison - system: {system.name}, levels: {levels}, "
        f"max_abs_error: {result.max_abs_error:.3e}, scale: {result.scale:.12g}"
    )
    return result


def skew_hermitian_defect(system: SpectralSystem, levels: int) -> float:
    """max |b_jk + conj(b_kj)| over 1 <= j, k <= levels."""
    block = system.coupling_block(np.arange(1, levels + 1))
    return float(np.max(np.abs(block + block.conj().T)))


def degenerate_uncoupled_pairs(system: SpectralSystem, levels: int, tol: float = 1e-12) -> list[tuple[int, int]]:
    """Pairs j < k with λ_j = λ_k (within tol) but b_jk != 0.

    An empty list means the spectral data respects the rule that equal
    eigenvalues are never coupled.
    """
    idx = np.arange(1, levels + 1)
    lam = system.eigenvalues_at(idx)
    block = system.coupling_block(idx)
    same = np.abs(lam[:, None] - lam[None, :]) <= tol
    bad = np.argwhere(np.triu(same & (np.abs(block) > 0), k=1))
    return [(int(r) + 1, int(c) + 1) for r, c in bad]


@dataclass(frozen=True)
class ChainTailReport:
    """Summability of Σ_j |b_{j,j+1}|^{-1} along the consecutive chain.

    Attributes:
        partial_sums: S_J for J = 1..upto
        growth_exponent: Least-squares slope of log|b_{j,j+1}| against log j
        last_increment: S_upto - S_{upto-1}
        tail_estimate: Σ_{j>upto} of the fitted power law c·j^{-p}
    """

    partial_sums: np.ndarray
    growth_exponent: float
    last_increment: float
    tail_estimate: float

    def cauchy_from(self, start: int, tol: float) -> bool:
        """Whether every increment S_J - S_{J-1} with J >= start stays below tol."""
        increments = np.diff(self.partial_sums)[start - 2 :]
        return bool(np.all(increments < tol))


def chain_couplings(system: SpectralSystem, upto: int) -> np.ndarray:
    """|b_{j,j+1}| for j = 1..upto."""
    j = np.arange(1, upto + 1, dtype=np.int64)
    return np.abs(np.asarray(system.couplings(j, j + 1), dtype=complex))


def growth_exponent(system: SpectralSystem, start: int = 10, stop: int = 200) -> float:
    """Fitted p in |b_{j,j+1}| ~ c·j^p over start <= j <= stop."""
    j = np.arange(start, stop + 1, dtype=float)
    mags = chain_couplings(system, stop)[start - 1 :]
    slope, _ = np.polyfit(np.log(j), np.log(mags), 1)
    return float(slope)


def chain_tail(system: SpectralSystem, upto: int = 200) -> ChainTailReport:
    """Partial sums of Σ|b_{j,j+1}|^{-1} with a fitted tail estimate.

    Raises:
        ValueError: If a chain coupling vanishes (the sum is undefined)
    """
    mags = chain_couplings(system, upto)
    if np.any(mags == 0):
        first = int(np.argmax(mags == 0)) + 1
        msg = f"Chain coupling b_({first},{first + 1}) vanishes"
        raise ValueError(msg)
    sums = np.cumsum(1.0 / mags)
    exponent = growth_exponent(system, start=max(1, upto // 20), stop=upto)
    c = mags[-1] / upto**exponent
    tail = math.inf if exponent <= 1 else (upto ** (1.0 - exponent)) / (c * (exponent - 1.0))
    return ChainTailReport(
        partial_sums=sums,
        growth_exponent=exponent,
        last_increment=float(sums[-1] - sums[-2]) if upto >= 2 else float(sums[-1]),
        tail_estimate=float(tail),
    )
