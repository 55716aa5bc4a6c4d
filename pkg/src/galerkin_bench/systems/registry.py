"""Name registry for the benchmark systems."""

from __future__ import annotations

import re
from typing import Callable

from galerkin_bench.models import SpectralSystem

from .catalog import make_anharmonic, make_harmonic, make_planar_rotor, make_square_well

_FIXED: dict[str, Callable[[], SpectralSystem]] = {
    "square-well": make_square_well,
    "harmonic": make_harmonic,
    "planar-rotor": make_planar_rotor,
}

_ANHARMONIC = re.compile(r"^anharmonic\(\s*alpha\s*=\s*(\d+)\s*\)$")


def available_systems() -> list[str]:
    """Names accepted by ``system_from_name``."""
    return [*_FIXED, "anharmonic(alpha=A)"]


def is_anharmonic(name: str) -> bool:
    """Whether a name selects the anharmonic family."""
    return name.strip().startswith("anharmonic")


def system_from_name(name: str) -> SpectralSystem:
    """Build a benchmark system from its registry name.

    Args:
        name: ``square-well``, ``harmonic``, ``planar-rotor`` or ``anharmonic(alpha=A)``

    Raises:
        ValueError: For unknown names or alpha < 1
    """
    key = name.strip()
    if key in _FIXED:
        return _FIXED[key]()
    match = _ANHARMONIC.match(key)
    if match:
        return make_anharmonic(int(match.group(1)))
    msg = f"Unknown system {name!r}; expected one of {', '.join(available_systems())}"
    raise ValueError(msg)
