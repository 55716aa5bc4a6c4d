"""Experiment and sweep configuration (pydantic models loaded from YAML)."""

from __future__ import annotations

import logging
import math
from enum import Enum
from pathlib import Path
from typing import Annotated, Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from galerkin_bench.effects import IO, Effect, ErrorDetails, Failure, Result, Success
from galerkin_bench.models import Waveform
from galerkin_bench.services.synth import DEFAULT_STEPS_PER_PERIOD
from galerkin_bench.systems import is_anharmonic, system_from_name

logger = logging.getLogger(__name__)

UNIT_NORM_TOLERANCE = 1e-10
DEFAULT_NORM_GROWTH_ORDERS = (1, 2)


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SystemFileSpec(_Strict):
    """System loaded from a spectral data file."""

    file: Path = Field(..., description="Path to a spectral data YAML file")


class TableControl(_Strict):
    """Explicit piecewise constant control."""

    kind: Literal["table"] = "table"
    breakpoints: list[float] = Field(..., min_length=1, description="Strictly increasing times starting at 0")
    values: list[float] = Field(default_factory=list, description="One value per segment")

    @model_validator(mode="after")
    def validate_table(self) -> TableControl:
        """Check lengths here so errors surface before any computation."""
        if len(self.values) != len(self.breakpoints) - 1:
            msg = "A control table needs exactly one value per segment"
            raise ValueError(msg)
        if self.breakpoints[0] != 0.0:
            msg = "Control breakpoints must start at 0"
            raise ValueError(msg)
        if any(b <= a for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            msg = "Control breakpoints must be strictly increasing"
            raise ValueError(msg)
        if not all(math.isfinite(v) for v in self.values):
            msg = "Control values must be finite"
            raise ValueError(msg)
        return self


class ZeroControl(_Strict):
    """u ≡ 0 over a horizon."""

    kind: Literal["zero"] = "zero"
    horizon: float = Field(default=0.0, ge=0, description="Run length")


class TransferControl(_Strict):
    """Resonant pulse designed for one transition."""

    kind: Literal["transfer"] = "transfer"
    transition: tuple[int, int] = Field(..., description="(j, k), population moves from j to k")
    amplitude: float = Field(..., gt=0)
    shape: Waveform = Waveform.COSINE
    phase: float = 0.0
    table: list[float] = Field(default_factory=list, description="One period for tabulated shapes")
    steps_per_period: int = Field(default=DEFAULT_STEPS_PER_PERIOD, ge=4)

    @field_validator("transition")
    @classmethod
    def validate_transition(cls, value: tuple[int, int]) -> tuple[int, int]:
        """Levels are 1-based and distinct."""
        if min(value) < 1 or value[0] == value[1]:
            msg = f"Transition needs two distinct 1-based levels, got {value}"
            raise ValueError(msg)
        return value


class LadderControl(_Strict):
    """Concatenated transfers up the chain (1, 2), ..., (m - 1, m)."""

    kind: Literal["ladder"] = "ladder"
    top_level: int = Field(..., ge=2)
    amplitude: float = Field(..., gt=0)
    shape: Waveform = Waveform.COSINE
    steps_per_period: int = Field(default=DEFAULT_STEPS_PER_PERIOD, ge=4)


class FileControl(_Strict):
    """Control read from a control JSON artifact."""

    kind: Literal["file"] = "file"
    path: Path


ControlSpec = Annotated[
    Union[TableControl, ZeroControl, TransferControl, LadderControl, FileControl],
    Field(discriminator="kind"),
]


class LevelState(_Strict):
    """Initial state φ_k."""

    level: int = Field(..., ge=1)


class CoefficientState(_Strict):
    """Initial state given by (re, im) coefficient pairs."""

    coefficients: list[tuple[float, float]] = Field(..., min_length=1)

    @model_validator(mode="after")
    def validate_norm(self) -> CoefficientState:
        """Reject non-unit states before any computation."""
        norm = math.sqrt(sum(re * re + im * im for re, im in self.coefficients))
        if abs(norm - 1.0) > UNIT_NORM_TOLERANCE:
            msg = f"Initial state must have unit norm, got {norm:.12g}"
            raise ValueError(msg)
        return self

    def as_complex(self) -> list[complex]:
        """Coefficients as complex numbers."""
        return [complex(re, im) for re, im in self.coefficients]


class CheckName(str, Enum):
    """Trajectory checks a run may request."""

    NORM_GROWTH = "norm_growth"
    L1_LOWER_BOUND = "l1_lower_bound"
    ENERGY_VARIATION = "energy_variation"


class Tolerances(_Strict):
    """Numerical tolerances shared by all checks."""

    guard_edge_population: float = Field(default=1e-6, gt=0, description="Truncation-edge guard threshold")
    degeneracy: float = Field(default=1e-9, gt=0, description="Relative gap tolerance")
    coupling: float = Field(default=1e-14, ge=0, description="Absolute |b| below which a pair is uncoupled")
    l1_margin: float = Field(default=1e-6, ge=0)
    cauchy: float = Field(default=1e-6, gt=0, description="N versus 2N terminal distance target")
    collision: float = Field(default=1e-9, gt=0, description="Relative harmonic tolerance")
    inequality: float = Field(default=1e-8, ge=0)


class ExperimentConfig(_Strict):
    """One simulation run, validated fully before any computation.

    Example:
        >>> config = ExperimentConfig.model_validate(
        ...     {"system": "planar-rotor", "truncation": 12,
        ...      "control": {"kind": "transfer", "transition": [1, 2], "amplitude": 0.005}}
        ... )
    """

    schema_version: Literal[1] = 1
    system: Union[str, SystemFileSpec] = Field(..., description="Registry name or spectral data file")
    truncation: Union[Literal["auto"], Annotated[int, Field(ge=1)]] = Field(..., description="Order N or 'auto'")
    truncation_cap: Optional[int] = Field(default=None, ge=1)
    truncation_start: int = Field(default=4, ge=1)
    control: ControlSpec = Field(default_factory=ZeroControl)
    initial_state: Union[LevelState, CoefficientState] = Field(default_factory=lambda: LevelState(level=1))
    checks: list[CheckName] = Field(default_factory=lambda: [CheckName.NORM_GROWTH, CheckName.L1_LOWER_BOUND])
    norm_growth_orders: list[Annotated[int, Field(ge=1)]] = Field(
        default_factory=lambda: list(DEFAULT_NORM_GROWTH_ORDERS)
    )
    sample_dt: Optional[float] = Field(default=None, gt=0)
    output_dir: Path = Path("runs/latest")
    tolerances: Tolerances = Field(default_factory=Tolerances)

    @field_validator("system")
    @classmethod
    def validate_system_name(cls, value: Union[str, SystemFileSpec]) -> Union[str, SystemFileSpec]:
        """Unknown registry names are rejected here."""
        if isinstance(value, str):
            system_from_name(value)
        return value

    @model_validator(mode="after")
    def validate_truncation(self) -> ExperimentConfig:
        """Cross-field checks on the truncation order."""
        if self.truncation == "auto":
            if isinstance(self.system, str) and is_anharmonic(self.system) and self.truncation_cap is None:
                msg = "Automatic truncation for the anharmonic system requires truncation_cap"
                raise ValueError(msg)
            return self
        order = int(self.truncation)
        if isinstance(self.initial_state, LevelState) and self.initial_state.level > order:
            msg = f"Initial level {self.initial_state.level} exceeds truncation order {order}"
            raise ValueError(msg)
        if isinstance(self.initial_state, CoefficientState) and len(self.initial_state.coefficients) > order:
            msg = f"Initial state has more coefficients than truncation order {order}"
            raise ValueError(msg)
        return self

    @property
    def system_label(self) -> str:
        """Registry name or file path, for logs and summaries."""
        return self.system if isinstance(self.system, str) else str(self.system.file)


class AmplitudeScalingGrid(_Strict):
    """Runs u*/n over n·T* for every n."""

    kind: Literal["amplitude_scaling"] = "amplitude_scaling"
    transition: tuple[int, int] = (1, 2)
    shape: Waveform = Waveform.COSINE
    base_amplitude: float = Field(..., gt=0)
    n_list: list[Annotated[int, Field(ge=1)]] = Field(default_factory=list)
    steps_per_period: int = Field(default=DEFAULT_STEPS_PER_PERIOD, ge=4)


class TruncationGrid(_Strict):
    """N versus 2N Cauchy errors for a fixed control."""

    kind: Literal["truncation"] = "truncation"
    orders: list[Annotated[int, Field(ge=1)]] = Field(default_factory=list)


class SweepConfig(ExperimentConfig):
    """An experiment plus a parameter grid, one table row per grid cell."""

    grid: Annotated[Union[AmplitudeScalingGrid, TruncationGrid], Field(discriminator="kind")]
    jobs: int = Field(default=1, ge=1, description="Concurrent grid cells")

    @model_validator(mode="after")
    def validate_grid(self) -> SweepConfig:
        """Amplitude scaling runs at a fixed order."""
        if isinstance(self.grid, AmplitudeScalingGrid) and self.truncation == "auto":
            msg = "Amplitude scaling sweeps need an explicit truncation order"
            raise ValueError(msg)
        return self


def parse_config(
    data: object, model: type[ExperimentConfig] = ExperimentConfig
) -> Result[ErrorDetails, ExperimentConfig]:
    """Validate an already parsed document.

    Returns:
        Success with the config, or Failure(CONFIG_INVALID) listing every error
    """
    try:
        return Success(model.model_validate(data))
    except ValidationError as e:
        errors = [{"loc": ".".join(str(p) for p in err["loc"]), "msg": err["msg"]} for err in e.errors()]
        logger.error(f"Invalid configuration - model: {model.__name__}, errors: {len(errors)}")
        return Failure(ErrorDetails("CONFIG_INVALID", f"Invalid {model.__name__}", {"errors": errors}))


def load_config(
    path: str | Path, model: type[ExperimentConfig] = ExperimentConfig
) -> IO[Result[ErrorDetails, ExperimentConfig]]:
    """Read a YAML (or JSON) config file.

    Returns:
        IO containing Result with the config, or FILE_NOT_FOUND / CONFIG_INVALID
    """

    def _load() -> Result[ErrorDetails, ExperimentConfig]:
        file_path = Path(path)
        if not file_path.exists():
            return Failure(ErrorDetails("FILE_NOT_FOUND", f"Config file not found: {file_path}"))
        try:
            with file_path.open(encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            return Failure(ErrorDetails("CONFIG_INVALID", f"Config is not valid YAML: {file_path}", {"error": str(e)}))
        logger.info(f"Loaded config - path: {file_path}, model: {model.__name__}")
        return parse_config(data, model)

    return Effect(_load)
