"""Galerkin compressions and truncation-order estimates."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from typing import Optional

import numpy as np

from galerkin_bench.effects import ErrorDetails, Failure, Result, Success
from galerkin_bench.models import (
    Compression,
    PiecewiseConstantControl,
    SpectralSystem,
    TruncationReport,
    TruncationRow,
    measured_bandwidth,
)

from .propagator import GalerkinPropagator, embed_state, state_support

logger = logging.getLogger(__name__)

HARMONIC_ORDER_CAP = 10**6


def compress(system: SpectralSystem, order: int) -> Compression:
    """Order-N Galerkin pair (A^(N), B^(N)) on levels 1..N.

    Raises:
        ValueError: If order < 1
    """
    if order < 1:
        logger.error(f"Invalid truncation order - system: {system.name}, order: {order}")
        msg = f"Truncation order must be at least 1, got {order}"
        raise ValueError(msg)
    compression = compress_levels(system, range(1, order + 1))
    logger.debug(f"Compressed system - name: {system.name}, order: {order}, bandwidth: {compression.bandwidth}")
    return compression


def compress_levels(system: SpectralSystem, levels: Sequence[int]) -> Compression:
    """Restriction of (A, B) to an ordered set of levels, e.g. (j, k) for a two-level model."""
    idx = np.asarray(list(levels), dtype=np.int64)
    if idx.size == 0:
        msg = "At least one level is required"
        raise ValueError(msg)
    if np.unique(idx).size != idx.size:
        msg = "Levels must be distinct"
        raise ValueError(msg)
    coupling = system.coupling_block(idx)
    return Compression(
        levels=tuple(int(k) for k in idx),
        drift=np.diag(1j * system.eigenvalues_at(idx)),
        coupling=coupling,
        parent=system,
        bandwidth=measured_bandwidth(coupling),
    )


def harmonic_truncation_log_bound(order: int, budget: float) -> float:
    """log of 2^{N-1}·sqrt(N+2)/(N-1)!·sqrt((2N)!/(N+1)!)·K^N, -inf when K = 0."""
    if order < 1:
        msg = f"Order must be at least 1, got {order}"
        raise ValueError(msg)
    if budget < 0:
        msg = f"Budget must be nonnegative, got {budget}"
        raise ValueError(msg)
    if budget == 0:
        return -math.inf
    n = float(order)
    return (
        (n - 1.0) * math.log(2.0)
        + 0.5 * math.log(n + 2.0)
        - math.lgamma(n)
        + 0.5 * (math.lgamma(2.0 * n + 1.0) - math.lgamma(n + 2.0))
        + n * math.log(budget)
    )


def harmonic_truncation_bound(order: int, budget: float) -> float:
    """The harmonic oscillator truncation error bound for an L¹ budget K (may overflow to inf)."""
    log_value = harmonic_truncation_log_bound(order, budget)
    return 0.0 if log_value == -math.inf else math.exp(min(log_value, 709.0))


def harmonic_truncation_order(budget: float, eps: float, cap: int = HARMONIC_ORDER_CAP) -> Result[ErrorDetails, int]:
    """Smallest N with harmonic_truncation_bound(N, K) < eps.

    The bound is log-concave in N, so the set where it is below eps (past
    N = 1) is a tail; it is bracketed by doubling and then bisected.

    Args:
        budget: L¹ budget K >= 0
        eps: Target error > 0
        cap: Largest order searched

    Returns:
        Success with the order, or Failure(NO_TRUNCATION_ORDER) above the cap

    Raises:
        ValueError: If K < 0 or eps <= 0
    """
    if budget < 0 or not eps > 0:
        logger.error(f"Invalid truncation request - K: {budget}, eps: {eps}")
        msg = f"Need K >= 0 and eps > 0, got K={budget}, eps={eps}"
        raise ValueError(msg)
    log_eps = math.log(eps)

    def below(n: int) -> bool:
        return harmonic_truncation_log_bound(n, budget) < log_eps

    if below(1):
        return Success(1)
    lo, hi = 1, 2
    while not below(hi):
        if hi >= cap:
            return Failure(
                ErrorDetails(
                    "NO_TRUNCATION_ORDER",
                    f"No order up to {cap} meets the bound",
                    {"K": budget, "eps": eps, "cap": cap},
                )
            )
        lo, hi = hi, min(2 * hi, cap)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if below(mid):
            hi = mid
        else:
            lo = mid
    logger.info(f"Harmonic truncation order - K: {budget}, eps: {eps}, order: {hi}")
    return Success(hi)


def _terminal(
    system: SpectralSystem, order: int, control: PiecewiseConstantControl, psi0: np.ndarray
) -> np.ndarray:
    return GalerkinPropagator(compress(system, order)).terminal_state(control, embed_state(psi0, order))


def _distance(a: np.ndarray, b: np.ndarray) -> float:
    n = max(a.size, b.size)
    return float(np.linalg.norm(np.pad(a, (0, n - a.size)) - np.pad(b, (0, n - b.size))))


def empirical_truncation_order(
    system: SpectralSystem,
    control: PiecewiseConstantControl,
    psi0: np.ndarray,
    eps: float,
    cap: int,
    start: Optional[int] = None,
) -> Result[ErrorDetails, TruncationReport]:
    """Smallest N in N₀, 2N₀, ... whose terminal state is within eps of the order-2N run.

    N₀ is the support of psi0, raised to ``start`` when given. The result
    certifies this control only, not a whole L¹ ball.

    Returns:
        Success with the report, or Failure(TRUNCATION_CAP_EXCEEDED) carrying the error curve
    """
    if not eps > 0:
        msg = f"eps must be positive, got {eps}"
        raise ValueError(msg)
    support = state_support(psi0)
    if support == 0:
        msg = "Initial state is zero"
        raise ValueError(msg)
    if support > cap:
        msg = f"Initial state needs {support} levels, above the cap {cap}"
        raise ValueError(msg)
    order = max(support, start or 0)
    rows: list[TruncationRow] = []
    current = _terminal(system, order, control, psi0)
    while 2 * order <= cap:
        reference = _terminal(system, 2 * order, control, psi0)
        error = _distance(current, reference)
        rows.append(TruncationRow(order, 2 * order, error))
        logger.debug(f"Truncation step - system: {system.name}, order: {order}, error: {error:.3e}")
        if error < eps:
            logger.info(f"Empirical truncation order - system: {system.name}, order: {order}, eps: {eps}")
            return Success(TruncationReport(order=order, eps=eps, rows=tuple(rows)))
        order, current = 2 * order, reference
    logger.warning(f"Truncation cap exceeded - system: {system.name}, cap: {cap}, steps: {len(rows)}")
    return Failure(
        ErrorDetails(
            "TRUNCATION_CAP_EXCEEDED",
            f"No order up to {cap} reached eps={eps} for {system.name}",
            {"cap": cap, "eps": eps, "curve": [row.to_dict() for row in rows]},
        )
    )


def truncation_sweep(
    system: SpectralSystem, control: PiecewiseConstantControl, psi0: np.ndarray, orders: Sequence[int]
) -> tuple[TruncationRow, ...]:
    """Order-N versus order-2N terminal distance for each N in orders."""
    terminals: dict[int, np.ndarray] = {}

    def terminal(n: int) -> np.ndarray:
        if n not in terminals:
            terminals[n] = _terminal(system, n, control, psi0)
        return terminals[n]

    return tuple(TruncationRow(n, 2 * n, _distance(terminal(n), terminal(2 * n))) for n in orders)


def required_order_for_target(
    system: SpectralSystem,
    control: PiecewiseConstantControl,
    psi0: np.ndarray,
    target_level: int,
    reference_order: int,
    tol: float = 1e-3,
) -> int:
    """Smallest N >= target_level whose terminal target population is within tol of the reference order.

    Raises:
        ValueError: If the reference order does not contain the target level
    """
    if reference_order < target_level:
        msg = f"Reference order {reference_order} is below the target level {target_level}"
        raise ValueError(msg)
    reference = abs(_terminal(system, reference_order, control, psi0)[target_level - 1]) ** 2
    first = max(target_level, state_support(psi0))
    for order in range(first, reference_order + 1):
        population = abs(_terminal(system, order, control, psi0)[target_level - 1]) ** 2
        if abs(population - reference) < tol:
            logger.info(f"Required order - system: {system.name}, target: {target_level}, order: {order}")
            return order
    return reference_order
