"""Spectral data files: systems given by a finite table of λ_k and b_jk.

Format (YAML)::

    schema_version: 1
    name: three-level
    control_set: {kind: interval, lower: -1, upper: 1}
    eigenvalues: [-0.5, -2.0, -4.5]
    couplings: [[1, 2, 0.0, -0.4], [2, 3, 0.0, -0.3]]
    b_operator_norm: null
    known_coupling_bound: {1: 2.0}

Coupling triplets are (j, k, Re b_jk, Im b_jk) with 1-based indices. Missing
mirror entries are filled as b_kj = -conj(b_jk).
"""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Any, Literal, Optional

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from galerkin_bench.effects import IO, Effect, ErrorDetails, Failure, Result, Success
from galerkin_bench.models import ControlSet, SpectralSystem, SystemName, measured_bandwidth

logger = logging.getLogger(__name__)

SKEW_TOLERANCE = 1e-12


class ControlSetSpec(BaseModel):
    """Control set as written in a data file."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["interval", "finite"] = "interval"
    lower: float = -math.inf
    upper: float = math.inf
    values: list[float] = Field(default_factory=list)

    def to_control_set(self) -> ControlSet:
        """Convert to the domain ControlSet."""
        if self.kind == "finite":
            return ControlSet.finite(self.values)
        return ControlSet(lower=self.lower, upper=self.upper)


class SpectralDataFile(BaseModel):
    """Validated contents of a spectral data file."""

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = 1
    name: str = Field(..., min_length=1)
    control_set: ControlSetSpec = Field(default_factory=ControlSetSpec)
    eigenvalues: list[float] = Field(..., min_length=1)
    couplings: list[tuple[int, int, float, float]] = Field(default_factory=list)
    b_operator_norm: Optional[float] = Field(None, ge=0)
    known_coupling_bound: Optional[dict[int, float]] = None

    @model_validator(mode="after")
    def validate_couplings(self) -> SpectralDataFile:
        """Check indices and skew-Hermiticity of the listed triplets."""
        if not all(math.isfinite(v) for v in self.eigenvalues):
            msg = "Eigenvalues must be finite"
            raise ValueError(msg)
        n = len(self.eigenvalues)
        listed: dict[tuple[int, int], complex] = {}
        for j, k, re, im in self.couplings:
            if not (1 <= j <= n and 1 <= k <= n):
                msg = f"Coupling index ({j}, {k}) outside 1..{n}"
                raise ValueError(msg)
            if (j, k) in listed:
                msg = f"Coupling ({j}, {k}) listed twice"
                raise ValueError(msg)
            listed[(j, k)] = complex(re, im)
        for (j, k), b in listed.items():
            mirror = listed.get((k, j))
            if mirror is not None and abs(b + mirror.conjugate()) > SKEW_TOLERANCE:
                msg = f"Couplings ({j}, {k}) and ({k}, {j}) are not skew-Hermitian"
                raise ValueError(msg)
            if j == k and abs(b.real) > SKEW_TOLERANCE:
                msg = f"Diagonal coupling ({j}, {j}) must be purely imaginary"
                raise ValueError(msg)
        return self

    def coupling_matrix(self) -> np.ndarray:
        """Dense skew-Hermitian coupling matrix."""
        n = len(self.eigenvalues)
        matrix = np.zeros((n, n), dtype=complex)
        for j, k, re, im in self.couplings:
            matrix[k - 1, j - 1] = -complex(re, im).conjugate()
        for j, k, re, im in self.couplings:
            matrix[j - 1, k - 1] = complex(re, im)
        return matrix


class _TabulatedMagnitudes:
    def __init__(self, magnitudes: np.ndarray) -> None:
        self._values = magnitudes

    def __call__(self, k: np.ndarray) -> np.ndarray:
        return self._values[np.asarray(k) - 1]


class _TabulatedCouplings:
    def __init__(self, matrix: np.ndarray) -> None:
        self._matrix = matrix

    def __call__(self, j: np.ndarray, k: np.ndarray) -> np.ndarray:
        return self._matrix[np.asarray(j) - 1, np.asarray(k) - 1]


class _TabulatedBound:
    def __init__(self, table: dict[int, float]) -> None:
        self._table = dict(table)

    def __call__(self, k: int) -> float:
        return self._table.get(k, math.inf)


def system_from_data(data: dict[str, Any]) -> SpectralSystem:
    """Build a SpectralSystem from a parsed data document.

    Raises:
        ValueError: On schema or skew-Hermiticity violations
    """
    try:
        spec = SpectralDataFile.model_validate(data)
    except ValidationError as e:
        logger.error(f"Invalid spectral data - errors: {e.error_count()}")
        raise ValueError(str(e)) from e
    matrix = spec.coupling_matrix()
    matrix.setflags(write=False)
    magnitudes = -np.asarray(spec.eigenvalues, dtype=float)
    magnitudes.setflags(write=False)
    return SpectralSystem(
        name=SystemName(spec.name),
        magnitudes=_TabulatedMagnitudes(magnitudes),
        couplings=_TabulatedCouplings(matrix),
        control_set=spec.control_set.to_control_set(),
        known_coupling_bound=_TabulatedBound(spec.known_coupling_bound) if spec.known_coupling_bound else None,
        b_operator_norm=spec.b_operator_norm,
        bandwidth=measured_bandwidth(matrix),
        max_level=len(spec.eigenvalues),
        parameters={"levels": len(spec.eigenvalues)},
        math_note="Loaded from a spectral data file.",
    )


def _control_set_data(control_set: ControlSet) -> dict[str, Any]:
    data = control_set.to_dict()
    return {key: value for key, value in data.items() if not isinstance(value, str) or key == "kind"}


def system_to_data(system: SpectralSystem, levels: int) -> dict[str, Any]:
    """Tabulate the first ``levels`` levels of any system as a data document."""
    idx = np.arange(1, levels + 1)
    block = system.coupling_block(idx)
    rows, cols = np.nonzero(np.abs(block) > 0)
    data: dict[str, Any] = {
        "schema_version": 1,
        "name": f"{system.name}[{levels}]",
        "control_set": _control_set_data(system.control_set),
        "eigenvalues": system.eigenvalues_at(idx).tolist(),
        "couplings": [
            [int(r) + 1, int(c) + 1, float(block[r, c].real), float(block[r, c].imag)] for r, c in zip(rows, cols)
        ],
        "b_operator_norm": system.b_operator_norm,
    }
    if system.known_coupling_bound is not None:
        data["known_coupling_bound"] = {k: system.coupling_bound(k) for k in (1, 2, 3)}
    return data


def load_spectral_data(path: str | Path) -> IO[Result[ErrorDetails, SpectralSystem]]:
    """Load and validate a spectral data file.

    Returns:
        IO containing Result with the system, or FILE_NOT_FOUND / CONFIG_INVALID
    """

    def _load() -> Result[ErrorDetails, SpectralSystem]:
        file_path = Path(path)
        if not file_path.exists():
            return Failure(ErrorDetails("FILE_NOT_FOUND", f"Spectral data file not found: {file_path}"))
        try:
            with file_path.open(encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
            system = system_from_data(data)
        except (yaml.YAMLError, ValueError) as e:
            return Failure(ErrorDetails("CONFIG_INVALID", f"Invalid spectral data file: {file_path}", {"error": str(e)}))
        logger.info(f"Loaded spectral data - name: {system.name}, levels: {system.max_level}")
        return Success(system)

    return Effect(_load)
