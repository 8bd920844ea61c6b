"""Greedy message forwarding on lattice-embedded graphs.

Each holder passes the message to the contact closest (in lattice distance)
to the target. With the default strict rule a chain dies when no contact is
strictly closer than the current holder, which models attrition along
real-world chains.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Optional

from .errors import BadParameters
from .generators import GridGeometry, make_rng
from .graph import Graph


@dataclass(frozen=True)
class RoutingOutcome:
    delivered: bool
    chain_length: Optional[int] = None
    failure_reason: Optional[str] = None  # "dead-end" or "hop-limit"
    path: tuple = ()


def greedy_route(graph: Graph, geometry: GridGeometry, s: int, t: int, max_hops: int,
                 strict: bool = True) -> RoutingOutcome:
    """Forward from ``s`` towards ``t`` along out-edges.

    ``strict=False`` relaxes the dead-end rule: the holder may pass to its
    best not-yet-visited contact even when that contact is no closer.
    """
    graph._check(s)
    graph._check(t)
    if s == t:
        raise BadParameters("source and target must differ")
    u = s
    path = [s]
    visited = {s}
    while u != t:
        if len(path) - 1 >= max_hops:
            return RoutingOutcome(False, None, "hop-limit", tuple(path))
        here = geometry.distance(u, t)
        candidates = [v for v in graph.successors(u) if strict or v not in visited]
        if not candidates:
            return RoutingOutcome(False, None, "dead-end", tuple(path))
        best = min(candidates, key=lambda v: (geometry.distance(v, t), v))
        if strict and geometry.distance(best, t) >= here:
            return RoutingOutcome(False, None, "dead-end", tuple(path))
        u = best
        visited.add(u)
        path.append(u)
    return RoutingOutcome(True, len(path) - 1, None, tuple(path))


@dataclass(frozen=True)
class MilgramSummary:
    trials: int
    delivered: int
    completion_rate: float
    mean_completed_length: Optional[float]
    median_completed_length: Optional[float]


def sample_pairs(n: int, trials: int, seed) -> list[tuple[int, int]]:
    """``trials`` distinct ordered (source, target) pairs with source != target."""
    total = n * (n - 1)
    if not 1 <= trials <= total:
        raise BadParameters(f"trials must lie in [1, {total}]")
    rng = make_rng(seed)
    picks = rng.choice(total, size=trials, replace=False)
    pairs = []
    for idx in picks.tolist():
        s, r = divmod(idx, n - 1)
        pairs.append((s, r + (r >= s)))
    return pairs


def milgram_experiment(graph: Graph, geometry: GridGeometry, trials: int, max_hops: int,
                       seed=None, strict: bool = True) -> MilgramSummary:
    """Route ``trials`` random source/target pairs and summarise chain lengths."""
    lengths = []
    for s, t in sample_pairs(graph.n, trials, seed):
        out = greedy_route(graph, geometry, s, t, max_hops, strict)
        if out.delivered:
            lengths.append(out.chain_length)
    return MilgramSummary(
        trials=trials,
        delivered=len(lengths),
        completion_rate=len(lengths) / trials,
        mean_completed_length=statistics.fmean(lengths) if lengths else None,
        median_completed_length=float(statistics.median(lengths)) if lengths else None,
    )
