"""Configuration for pytest."""

from collections.abc import Generator
from pathlib import Path
from typing import Optional

import numpy as np
import pytest

from galerkin_bench.models import PiecewiseConstantControl, SpectralSystem, Trajectory, Verdict
from galerkin_bench.services import GalerkinPropagator, check_l1_lower_bound
from galerkin_bench.systems import make_anharmonic, make_harmonic, make_planar_rotor, make_square_well


@pytest.fixture(scope="session", autouse=True)
def l1_lower_bound_guard() -> Generator[None, None, None]:
    """Check the L¹ lower bound on every trajectory propagated during the session.

    Applies to compressions on levels 1..N, where the truncated column norms
    of B are the ones the bound is stated with. Session scoped so that
    hypothesis tests run under it too.
    """
    propagate = GalerkinPropagator.propagate

    def checked(
        self: GalerkinPropagator,
        control: PiecewiseConstantControl,
        psi0: np.ndarray,
        sample_dt: Optional[float] = None,
    ) -> Trajectory:
        trajectory = propagate(self, control, psi0, sample_dt)
        compression = self.compression
        if compression.levels == tuple(range(1, compression.order + 1)):
            report = check_l1_lower_bound(trajectory, compression.parent)
            assert report.verdict is Verdict.PASS, report.to_dict()
        return trajectory

    GalerkinPropagator.propagate = checked  # type: ignore[method-assign]
    yield
    GalerkinPropagator.propagate = propagate  # type: ignore[method-assign]


@pytest.fixture
def square_well() -> SpectralSystem:
    """Infinite square well on (0, π) with the dipole coupling."""
    return make_square_well()


@pytest.fixture
def harmonic() -> SpectralSystem:
    """Harmonic oscillator with the position coupling."""
    return make_harmonic()


@pytest.fixture
def rotor() -> SpectralSystem:
    """Planar rotor with the cos θ coupling."""
    return make_planar_rotor()


@pytest.fixture
def anharmonic3() -> SpectralSystem:
    """Even anharmonic family with alpha = 3."""
    return make_anharmonic(3)


@pytest.fixture
def staircase_control() -> PiecewiseConstantControl:
    """Three segments with L¹ norm 3: u = 1 on [0, 1), -1 on [1, 2), 0.5 on [2, 4)."""
    return PiecewiseConstantControl(breakpoints=(0.0, 1.0, 2.0, 4.0), values=(1.0, -1.0, 0.5))


@pytest.fixture
def output_dir(tmp_path: Path) -> Generator[Path, None, None]:
    """Isolated artifact directory for one test.

    The directory is created under pytest's tmp_path, so artifacts of a
    failing test stay on disk for inspection.
    """
    directory = tmp_path / "run"
    directory.mkdir()
    yield directory


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for randomized suites."""
    return np.random.default_rng(20240917)
