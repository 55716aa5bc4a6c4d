"""Galerkin compressions (A^(N), B^(N))."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .system import SpectralSystem


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Compression:
    """Restriction of (A, B) to the span of a finite set of eigenvectors.

    For ``compress(system, N)`` the levels are 1..N and the pair is the order-N
    Galerkin approximation. Arrays are read-only.

    Attributes:
        levels: 1-based levels spanned, in matrix order
        drift: Diagonal matrix with entries iλ_k
        coupling: Matrix with entries b_jk
        parent: The system the matrices were taken from
        bandwidth: max |row - col| over nonzero coupling entries
    """

    levels: tuple[int, ...]
    drift: np.ndarray
    coupling: np.ndarray
    parent: SpectralSystem
    bandwidth: int

    def __post_init__(self) -> None:
        """Freeze the arrays and check shapes."""
        n = len(self.levels)
        if n < 1:
            msg = "A compression needs at least one level"
            raise ValueError(msg)
        if self.drift.shape != (n, n) or self.coupling.shape != (n, n):
            msg = f"Matrix shapes must be ({n}, {n})"
            raise ValueError(msg)
        object.__setattr__(self, "drift", _frozen(self.drift.astype(complex)))
        object.__setattr__(self, "coupling", _frozen(self.coupling.astype(complex)))

    @property
    def order(self) -> int:
        """Number of retained levels N."""
        return len(self.levels)

    @property
    def eigenvalues(self) -> np.ndarray:
        """Signed eigenvalues λ_k of the retained levels."""
        return np.real(-1j * np.diag(self.drift))

    def generator(self, u: float) -> np.ndarray:
        """A^(N) + u·B^(N)."""
        return self.drift + u * self.coupling

    def hermitian_generator(self, u: float) -> np.ndarray:
        """i·(A^(N) + u·B^(N)), Hermitian for real u."""
        return 1j * self.generator(u)

    def is_banded(self) -> bool:
        """Whether a banded eigensolver pays off for this compression."""
        return 2 * self.bandwidth + 1 < self.order

    def column_norms(self) -> np.ndarray:
        """Truncated ||Bφ_n|| for each retained level."""
        return np.linalg.norm(self.coupling, axis=0)

    def leading_block(self, m: int) -> Compression:
        """Leading m×m block, equal to compressing the parent at order m."""
        if not 1 <= m <= self.order:
            msg = f"Block size must be in [1, {self.order}], got {m}"
            raise ValueError(msg)
        block = self.coupling[:m, :m]
        return Compression(
            levels=self.levels[:m],
            drift=self.drift[:m, :m],
            coupling=block,
            parent=self.parent,
            bandwidth=measured_bandwidth(block),
        )

    def skew_hermitian_defect(self, u: Optional[float] = None) -> float:
        """max |M + M^*| for M = B^(N), or A^(N) + uB^(N) when u is given."""
        m = self.coupling if u is None else self.generator(u)
        return float(np.max(np.abs(m + m.conj().T)))

    def __repr__(self) -> str:
        """Return string representation for debugging."""
        return f"Compression({self.parent.name}, N={self.order}, bandwidth={self.bandwidth})"


def measured_bandwidth(coupling: np.ndarray, tol: float = 0.0) -> int:
    """max |j - k| over entries with |b_jk| > tol."""
    rows, cols = np.nonzero(np.abs(coupling) > tol)
    if rows.size == 0:
        return 0
    return int(np.max(np.abs(rows - cols)))
