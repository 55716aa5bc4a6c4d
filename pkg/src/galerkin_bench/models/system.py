"""Spectrally specified bilinear systems (frozen dataclasses)."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Optional

import numpy as np

from .types import SystemName

# Vectorized spectral data: 1-based integer arrays in, float/complex arrays out.
MagnitudeFn = Callable[[np.ndarray], np.ndarray]
CouplingFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


class ControlSetKind(str, Enum):
    """Shape of the admissible control set U."""

    INTERVAL = "interval"
    FINITE = "finite"


@dataclass(frozen=True)
class ControlSet:
    """Admissible control values U.

    Attributes:
        kind: Interval or finite set
        lower: Lower end of the interval (may be -inf)
        upper: Upper end of the interval (may be +inf)
        values: Members of a finite set
    """

    kind: ControlSetKind = ControlSetKind.INTERVAL
    lower: float = -math.inf
    upper: float = math.inf
    values: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        """Check that U contains 0 and 1."""
        if self.kind is ControlSetKind.FINITE:
            if not self.values:
                msg = "Finite control set must list its values"
                raise ValueError(msg)
        elif self.lower > self.upper:
            msg = f"Empty control interval [{self.lower}, {self.upper}]"
            raise ValueError(msg)
        if not (self.contains(0.0) and self.contains(1.0)):
            msg = "Control set must contain 0 and 1"
            raise ValueError(msg)

    @classmethod
    def real_line(cls) -> ControlSet:
        """U = R."""
        return cls()

    @classmethod
    def finite(cls, values: Sequence[float]) -> ControlSet:
        """Finite control set such as {0, 1}."""
        return cls(kind=ControlSetKind.FINITE, values=tuple(sorted(float(v) for v in values)))

    def contains(self, u: float) -> bool:
        """Check membership of a single control value."""
        if self.kind is ControlSetKind.FINITE:
            return any(abs(u - v) <= 1e-12 for v in self.values)
        return self.lower <= u <= self.upper

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready dictionary."""
        if self.kind is ControlSetKind.FINITE:
            return {"kind": self.kind.value, "values": list(self.values)}
        return {"kind": self.kind.value, "lower": _finite_or_str(self.lower), "upper": _finite_or_str(self.upper)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ControlSet:
        """Inverse of to_dict."""
        kind = ControlSetKind(data.get("kind", "interval"))
        if kind is ControlSetKind.FINITE:
            return cls.finite(data["values"])
        return cls(lower=float(data.get("lower", "-inf")), upper=float(data.get("upper", "inf")))


def _finite_or_str(x: float) -> float | str:
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


@dataclass(frozen=True, eq=False)
class SpectralSystem:
    """A bilinear system dψ/dt = (A + uB)ψ given by its spectral data only.

    The drift is diagonal in the basis (φ_k), Aφ_k = iλ_k φ_k, and the coupling
    is the matrix b_jk = <φ_j, Bφ_k>. Eigenvalues are stored as magnitudes
    μ_k together with an explicit sign, λ_k = sign·μ_k; the benchmark systems
    use sign = -1 so that λ_k tends to -inf. Every public index is 1-based.

    Attributes:
        name: Registry name, e.g. ``planar-rotor`` or ``anharmonic(alpha=3)``
        magnitudes: Vectorized k ↦ μ_k
        couplings: Vectorized (j, k) ↦ b_jk, skew-Hermitian
        control_set: Admissible control values U
        known_coupling_bound: Optional k ↦ upper bound on c_k(A, B)
        b_operator_norm: Operator norm of B when B is bounded, else None
        bandwidth: max |j - k| with b_jk != 0 when known, None for dense coupling
        max_level: Highest available level for finite (data file) systems
        sign: Sign convention, λ_k = sign·μ_k
        parameters: Construction parameters (e.g. ``{"alpha": 3}``)
        math_note: Free-form remarks about conventions
    """

    name: SystemName
    magnitudes: MagnitudeFn
    couplings: CouplingFn
    control_set: ControlSet = field(default_factory=ControlSet.real_line)
    known_coupling_bound: Optional[Callable[[int], float]] = None
    b_operator_norm: Optional[float] = None
    bandwidth: Optional[int] = None
    max_level: Optional[int] = None
    sign: int = -1
    parameters: dict[str, Any] = field(default_factory=dict)
    math_note: str = ""

    def __post_init__(self) -> None:
        """Validate the sign convention."""
        if self.sign not in (-1, 1):
            msg = f"sign must be -1 or +1, got {self.sign}"
            raise ValueError(msg)

    def _check_levels(self, levels: np.ndarray) -> None:
        if levels.size and int(levels.min()) < 1:
            msg = "Levels are 1-based"
            raise ValueError(msg)
        if self.max_level is not None and levels.size and int(levels.max()) > self.max_level:
            msg = f"System {self.name} only provides levels up to {self.max_level}"
            raise ValueError(msg)

    def eigenvalue(self, k: int) -> float:
        """Signed eigenvalue λ_k."""
        return float(self.eigenvalues_at([k])[0])

    def eigenvalues_at(self, levels: Sequence[int] | np.ndarray) -> np.ndarray:
        """Signed eigenvalues λ_k for the given levels."""
        idx = np.asarray(levels, dtype=np.int64)
        self._check_levels(idx)
        return self.sign * np.asarray(self.magnitudes(idx), dtype=float)

    def eigenvalues(self, order: int) -> np.ndarray:
        """Signed eigenvalues λ_1 .. λ_N."""
        return self.eigenvalues_at(np.arange(1, order + 1))

    def gap(self, j: int, k: int) -> float:
        """Transition frequency |λ_j - λ_k|."""
        lam = self.eigenvalues_at([j, k])
        return float(abs(lam[0] - lam[1]))

    def coupling(self, j: int, k: int) -> complex:
        """Matrix element b_jk = <φ_j, Bφ_k>."""
        idx = np.asarray([j, k], dtype=np.int64)
        self._check_levels(idx)
        return complex(np.asarray(self.couplings(idx[:1], idx[1:]))[0])

    def hermitian_part(self, j: int, k: int) -> complex:
        """Element V_jk of the Hermitian coupling potential, B = -i·V."""
        return 1j * self.coupling(j, k)

    def coupling_block(self, levels: Sequence[int] | np.ndarray) -> np.ndarray:
        """Dense coupling matrix restricted to an ordered set of levels."""
        idx = np.asarray(levels, dtype=np.int64)
        self._check_levels(idx)
        rows, cols = np.meshgrid(idx, idx, indexing="ij")
        return np.asarray(self.couplings(rows, cols), dtype=complex).reshape(len(idx), len(idx))

    def coupling_bound(self, k: int) -> Optional[float]:
        """Known upper bound on c_k(A, B), if any."""
        if self.known_coupling_bound is None:
            return None
        return float(self.known_coupling_bound(k))

    def __repr__(self) -> str:
        """Return string representation for debugging."""
        return f"SpectralSystem({self.name})"
