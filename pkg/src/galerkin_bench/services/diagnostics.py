"""Structural and quantitative checks on systems and trajectories.

Trajectory inequalities are evaluated at Galerkin level. Checks that only
hold for the infinite-dimensional system carry a truncation-edge guard: when
the top retained level gets too much population the check is SKIPPED, never
silently passed.
"""

from __future__ import annotations

import logging
import math
from collections import Counter, deque
from collections.abc import Iterable
from typing import Any, Optional

import numpy as np

from galerkin_bench.effects import ErrorDetails, Failure, Result, Success
from galerkin_bench.models import (
    ChainReport,
    DiagnosticReport,
    GapCoincidence,
    SpectralSystem,
    Trajectory,
    TransitionEdge,
    TransitionGraph,
    Verdict,
)

from .galerkin import compress

logger = logging.getLogger(__name__)

DEFAULT_GUARD = 1e-6
DEFAULT_DEGENERACY_TOL = 1e-9
DEFAULT_COUPLING_TOL = 1e-14
DEFAULT_L1_MARGIN = 1e-6
DEFAULT_INEQUALITY_TOL = 1e-8


def transition_graph(
    system: SpectralSystem,
    order: int,
    tol: float = DEFAULT_DEGENERACY_TOL,
    coupling_tol: float = DEFAULT_COUPLING_TOL,
) -> TransitionGraph:
    """Coupled pairs on levels 1..N with their gaps and degeneracy flags.

    Edge (j, k) is degenerate when another coupled pair sharing exactly one
    level with it has the same gap within tol·(largest edge gap). Equal gaps
    on disjoint pairs are collected in ``coincidences`` instead.

    Raises:
        ValueError: If order < 2
    """
    if order < 2:
        msg = f"Scan depth must be at least 2, got {order}"
        raise ValueError(msg)
    idx = np.arange(1, order + 1)
    lam = system.eigenvalues_at(idx)
    magnitude = np.abs(system.coupling_block(idx))
    rows, cols = np.nonzero(np.triu(magnitude > coupling_tol, k=1))
    gaps = np.abs(lam[rows] - lam[cols])
    abs_tol = tol * float(gaps.max()) if gaps.size else 0.0

    same_gap = np.abs(gaps[:, None] - gaps[None, :]) <= abs_tol
    shared = (
        (rows[:, None] == rows[None, :]).astype(int)
        + (rows[:, None] == cols[None, :])
        + (cols[:, None] == rows[None, :])
        + (cols[:, None] == cols[None, :])
    )
    degenerate = np.any(same_gap & (shared == 1), axis=1)

    edges = tuple(
        TransitionEdge(int(r) + 1, int(c) + 1, float(g), float(magnitude[r, c]), bool(d))
        for r, c, g, d in zip(rows, cols, gaps, degenerate)
    )
    graph = TransitionGraph(order=order, edges=edges, coincidences=_coincidences(edges, abs_tol), tolerance=abs_tol)
    logger.info(
        f"Transition graph - system: {system.name}, order: {order}, edges: {len(edges)}, "
        f"degenerate: {len(graph.degenerate_edges())}, coincidences: {len(graph.coincidences)}"
    )
    return graph


def _coincidences(edges: tuple[TransitionEdge, ...], abs_tol: float) -> tuple[GapCoincidence, ...]:
    groups: list[list[TransitionEdge]] = []
    for edge in sorted(edges, key=lambda e: (e.gap, e.j, e.k)):
        if groups and edge.gap - groups[-1][-1].gap <= abs_tol:
            groups[-1].append(edge)
        else:
            groups.append([edge])
    return tuple(
        GapCoincidence(gap=group[0].gap, pairs=tuple(sorted(e.pair for e in group)))
        for group in groups
        if len(group) > 1
    )


def find_nondegenerate_chain(
    system: SpectralSystem,
    order: int,
    tol: float = DEFAULT_DEGENERACY_TOL,
    coupling_tol: float = DEFAULT_COUPLING_TOL,
) -> Result[ErrorDetails, ChainReport]:
    """Breadth-first search from level 1 over non-degenerate edges only.

    Returns:
        Success with the spanning chain, or Failure(NO_NONDEGENERATE_CHAIN)
        carrying the reachable component
    """
    graph = transition_graph(system, order, tol, coupling_tol)
    adjacency = graph.adjacency(nondegenerate_only=True)
    seen = {1}
    tree: list[tuple[int, int]] = []
    queue = deque([1])
    while queue:
        v = queue.popleft()
        for w in adjacency[v]:
            if w not in seen:
                seen.add(w)
                tree.append((min(v, w), max(v, w)))
                queue.append(w)
    component = tuple(sorted(seen))
    if len(component) < order:
        logger.info(f"No non-degenerate chain - system: {system.name}, order: {order}, component: {len(component)}")
        return Failure(
            ErrorDetails(
                "NO_NONDEGENERATE_CHAIN",
                f"Non-degenerate edges of {system.name} do not connect levels 1..{order}",
                {"order": order, "component": list(component)},
            )
        )
    edges = tuple(sorted(e.pair for e in graph.nondegenerate_edges() if e.j in seen and e.k in seen))
    return Success(ChainReport(order=order, tree=tuple(sorted(tree)), edges=edges, component=component))


def _guard_state(trajectory: Trajectory, guard: float) -> dict[str, Any]:
    return {"edge_population": trajectory.edge_population(), "threshold": guard, "order": trajectory.order}


def _guard_tripped(trajectory: Trajectory, guard: float) -> bool:
    return trajectory.edge_population() >= guard


def check_norm_growth(
    trajectory: Trajectory,
    system: SpectralSystem,
    k: int,
    c_k: Optional[float] = None,
    guard: float = DEFAULT_GUARD,
    tolerance: float = DEFAULT_INEQUALITY_TOL,
) -> DiagnosticReport:
    """||(|A|^{k/2})x(t)|| <= e^{c_k·∫_0^t|u|}·||(|A|^{k/2})x(0)|| at every grid time.

    c_k defaults to the system's known coupling bound. The reported measured
    and bound values are those of the worst grid time.
    """
    c = system.coupling_bound(k) if c_k is None else c_k
    parameters: dict[str, Any] = {"k": k, "c_k": c, "order": trajectory.order, "l1": trajectory.control_l1}
    state = _guard_state(trajectory, guard)
    if c is None:
        return _skip("norm_growth", system, parameters, "no known coupling bound c_k", state)
    if _guard_tripped(trajectory, guard):
        return _skip("norm_growth", system, parameters, "truncation-edge population above guard", state)

    weights = np.abs(system.eigenvalues(trajectory.order)) ** (k / 2.0)
    norms = np.linalg.norm(trajectory.states * weights[None, :], axis=1)
    exponents = c * trajectory.cumulative_l1
    growth = np.where(exponents > 700.0, math.inf, np.exp(np.minimum(exponents, 700.0)))
    bounds = growth * norms[0] if norms[0] > 0 else np.zeros_like(growth)
    worst = int(np.argmax(norms - bounds))
    report = DiagnosticReport.inequality(
        "norm_growth",
        system.name,
        parameters,
        measured=float(norms[worst]),
        bound=float(bounds[worst]),
        tolerance=tolerance * max(1.0, float(norms[0])),
        guard=state,
        extra={"worst_time": float(trajectory.times[worst]), "terminal_ratio": _ratio(norms[-1], norms[0])},
    )
    _log_verdict(report)
    return report


def check_l1_lower_bound(
    trajectory: Trajectory,
    system: SpectralSystem,
    margin: float = DEFAULT_L1_MARGIN,
    guard: float = DEFAULT_GUARD,
) -> DiagnosticReport:
    """sup_n | |x_n(0)| - |x_n(t)| | / ||Bφ_n||_(N) <= ∫_0^t|u| at every grid time.

    Levels whose truncated column norm vanishes are left out of the supremum.
    """
    parameters: dict[str, Any] = {"order": trajectory.order, "l1": trajectory.control_l1}
    columns = compress(system, trajectory.order).column_norms()
    active = columns > 0
    if not np.any(active):
        lhs = np.zeros(trajectory.times.size)
    else:
        moduli = np.abs(trajectory.states)
        change = np.abs(moduli[0][None, :] - moduli)[:, active]
        lhs = np.max(change / columns[active][None, :], axis=1)
    worst = int(np.argmax(lhs - trajectory.cumulative_l1))
    report = DiagnosticReport.inequality(
        "l1_lower_bound",
        system.name,
        parameters,
        measured=float(lhs[worst]),
        bound=float(trajectory.cumulative_l1[worst]),
        tolerance=margin,
        guard=_guard_state(trajectory, guard),
        extra={
            "worst_time": float(trajectory.times[worst]),
            "worst_margin": float(trajectory.cumulative_l1[worst] - lhs[worst]),
            "implied_l1": float(lhs[-1]),
        },
    )
    _log_verdict(report)
    return report


def check_energy_variation(
    trajectory: Trajectory,
    system: SpectralSystem,
    b_operator_norm: Optional[float] = None,
    guard: float = DEFAULT_GUARD,
    tolerance: float = DEFAULT_INEQUALITY_TOL,
) -> Result[ErrorDetails, DiagnosticReport]:
    """||Ax(t)|| <= ||Ax(t_s)|| + 2|u_s|·||B|| for every grid time t in segment s.

    Returns:
        Success with the report (possibly SKIPPED by the guard), or
        Failure(B_UNBOUNDED) for systems without a declared operator norm
    """
    norm_b = system.b_operator_norm if b_operator_norm is None else b_operator_norm
    if norm_b is None:
        return Failure(
            ErrorDetails("B_UNBOUNDED", f"B unbounded for {system.name}; no operator norm declared", {"system": system.name})
        )
    parameters: dict[str, Any] = {"b_operator_norm": norm_b, "order": trajectory.order}
    state = _guard_state(trajectory, guard)
    if _guard_tripped(trajectory, guard):
        return Success(_skip("energy_variation", system, parameters, "truncation-edge population above guard", state))

    energy = np.linalg.norm(trajectory.states * system.eigenvalues(trajectory.order)[None, :], axis=1)
    control = trajectory.control
    if control.segment_count == 0:
        measured, bound, worst_time = float(energy[0]), float(energy[0]), 0.0
    else:
        starts = np.searchsorted(trajectory.times, np.asarray(control.breakpoints[:-1]))
        segments = trajectory.segment_index[1:]
        values = np.abs(np.asarray(control.values))
        bounds = energy[starts[segments]] + 2.0 * values[segments] * norm_b
        worst = int(np.argmax(energy[1:] - bounds))
        measured, bound, worst_time = float(energy[1 + worst]), float(bounds[worst]), float(trajectory.times[1 + worst])
    report = DiagnosticReport.inequality(
        "energy_variation",
        system.name,
        parameters,
        measured=measured,
        bound=bound,
        tolerance=tolerance * max(1.0, float(energy[0])),
        guard=state,
        extra={"worst_time": worst_time},
    )
    _log_verdict(report)
    return Success(report)


def summarize_reports(reports: Iterable[DiagnosticReport]) -> dict[str, Any]:
    """Counts per verdict and per check, plus whether every non-skipped check passed."""
    reports = list(reports)
    verdicts = Counter(r.verdict.value for r in reports)
    by_check: dict[str, dict[str, int]] = {}
    for r in reports:
        by_check.setdefault(r.check, {v.value: 0 for v in Verdict})[r.verdict.value] += 1
    return {
        "total": len(reports),
        "verdicts": {v.value: verdicts.get(v.value, 0) for v in Verdict},
        "checks": dict(sorted(by_check.items())),
        "all_passed": verdicts.get(Verdict.FAIL.value, 0) == 0,
    }


def _skip(
    check: str, system: SpectralSystem, parameters: dict[str, Any], reason: str, state: dict[str, Any]
) -> DiagnosticReport:
    logger.warning(f"Check skipped - check: {check}, system: {system.name}, reason: {reason}")
    return DiagnosticReport.skipped(check, system.name, parameters, reason, state)


def _ratio(a: float, b: float) -> Optional[float]:
    return float(a / b) if b > 0 else None


def _log_verdict(report: DiagnosticReport) -> None:
    logger.info(
        f"Check verdict - check: {report.check}, system: {report.system}, verdict: {report.verdict.value}, "
        f"measured: {report.measured:.6g}, bound: {report.bound:.6g}"
    )
