"""Harmonic oscillator ladder algebra and normalized Hermite functions.

Oscillator indices m are 0-based here, as in the usual Fock basis. The
benchmark systems map their 1-based levels onto these indices.
"""

from __future__ import annotations

import math

import numpy as np


def ladder_matrices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Truncated lowering and raising operators (a, a†) on the first n Fock states.

    Args:
        n: Number of Fock states

    Returns:
        Tuple (a, ap) of real n×n matrices
    """
    if n < 1:
        msg = f"Ladder size must be positive, got {n}"
        raise ValueError(msg)
    off = np.sqrt(np.arange(1, n, dtype=float))
    a = np.diag(off, k=1)
    return a, a.T.copy()


def position_power_matrix(n: int, power: int, frequency: float = 1.0) -> np.ndarray:
    """Matrix of x^power on the first n eigenfunctions of -Δ/2 + frequency²x²/2.

    Built from x = (a + a†)/sqrt(2·frequency). Only the block with indices
    below n - power/2 is free of truncation error.
    """
    if power < 0:
        msg = f"Power must be nonnegative, got {power}"
        raise ValueError(msg)
    a, ap = ladder_matrices(n)
    x = (a + ap) / math.sqrt(2.0 * frequency)
    return np.linalg.matrix_power(x, power)


def quartic_elements(m: np.ndarray, mp: np.ndarray) -> np.ndarray:
    """Closed-form <m|(a + a†)^4|m'>, vectorized over index arrays.

    Nonzero only for |m - m'| in {0, 2, 4}.
    """
    m = np.asarray(m, dtype=np.int64)
    mp = np.asarray(mp, dtype=np.int64)
    lo = np.minimum(m, mp).astype(float)
    diff = np.abs(m - mp)
    out = np.zeros(np.broadcast(m, mp).shape, dtype=float)
    out = np.where(diff == 0, 6.0 * lo**2 + 6.0 * lo + 3.0, out)
    out = np.where(diff == 2, (4.0 * lo + 6.0) * np.sqrt((lo + 1.0) * (lo + 2.0)), out)
    out = np.where(diff == 4, np.sqrt((lo + 1.0) * (lo + 2.0) * (lo + 3.0) * (lo + 4.0)), out)
    return out


def hermite_polynomial_parts(m_max: int, y: np.ndarray) -> np.ndarray:
    """Polynomial factors Ĥ_m(y) of the normalized Hermite functions h_m = Ĥ_m·e^{-y²/2}.

    Uses the three-term recurrence
    Ĥ_{m+1} = sqrt(2/(m+1))·y·Ĥ_m - sqrt(m/(m+1))·Ĥ_{m-1}, Ĥ_0 = π^{-1/4}.

    Returns:
        Array of shape (m_max + 1, len(y))
    """
    y = np.asarray(y, dtype=float)
    out = np.empty((m_max + 1, y.size), dtype=float)
    out[0] = math.pi**-0.25
    if m_max >= 1:
        out[1] = math.sqrt(2.0) * y * out[0]
    for m in range(1, m_max):
        out[m + 1] = math.sqrt(2.0 / (m + 1)) * y * out[m] - math.sqrt(m / (m + 1)) * out[m - 1]
    return out
