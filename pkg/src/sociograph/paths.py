"""Geodesic (hop) distances and cost-based shortest paths.

Weighted distances run Dijkstra over per-edge costs. By default the cost of
a tie is the reciprocal of its weight, so strong ties are cheap to traverse
and an indirect pair can end up closer than a directly tied one.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import UnweightedGraph
from .graph import Graph


class _Unreachable:
    """No path exists. Falsy, and never equal to any number."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNREACHABLE"

    def __bool__(self):
        return False

    def __reduce__(self):
        return (_Unreachable, ())


UNREACHABLE = _Unreachable()

Distance = Union[float, _Unreachable]

COST_TRANSFORMS: dict[str, Callable[[float], float]] = {
    "reciprocal": lambda w: 1.0 / w,
    "identity": lambda w: w,
}


def _cost_fn(cost_transform: str) -> Callable[[float], float]:
    try:
        return COST_TRANSFORMS[cost_transform]
    except KeyError:
        raise ValueError(f"unknown cost transform {cost_transform!r}") from None


@dataclass
class DistanceResult:
    source: int
    dist: list  # float per node, UNREACHABLE where no path
    pred: list = field(default_factory=list)  # list of predecessor ids per node

    def __getitem__(self, t: int) -> Distance:
        return self.dist[t]


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-12 * max(1.0, abs(a), abs(b))


def bfs(graph: Graph, s: int, reverse: bool = False) -> DistanceResult:
    """Hop distances from ``s``; ``reverse`` follows edges backwards."""
    graph._check(s)
    adj = graph.predecessors if reverse else graph.successors
    dist: list = [UNREACHABLE] * graph.n
    pred: list[list[int]] = [[] for _ in range(graph.n)]
    dist[s] = 0
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in sorted(adj(u)):
            if dist[v] is UNREACHABLE:
                dist[v] = dist[u] + 1
                queue.append(v)
            if dist[v] == dist[u] + 1:
                pred[v].append(u)
    return DistanceResult(s, dist, pred)


def dijkstra(graph: Graph, s: int, cost_transform: str = "reciprocal",
             reverse: bool = False) -> DistanceResult:
    """Least total cost from ``s``; heap ordered by (cost, node id)."""
    graph._check(s)
    cost = _cost_fn(cost_transform)
    adj = graph.predecessors if reverse else graph.successors
    dist: list = [UNREACHABLE] * graph.n
    pred: list[list[int]] = [[] for _ in range(graph.n)]
    done = [False] * graph.n
    dist[s] = 0.0
    heap = [(0.0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in adj(u).items():
            if done[v]:
                continue
            nd = d + cost(w)
            cur = dist[v]
            if cur is UNREACHABLE or (nd < cur and not _close(nd, cur)):
                dist[v] = nd
                pred[v] = [u]
                heapq.heappush(heap, (nd, v))
            elif _close(nd, cur):
                pred[v].append(u)
    return DistanceResult(s, dist, pred)


def geodesic_distance(graph: Graph, s: int, t: int) -> Union[int, _Unreachable]:
    graph._check(t)
    return bfs(graph, s).dist[t]


def weighted_distance(graph: Graph, s: int, t: int,
                      cost_transform: str = "reciprocal") -> Distance:
    if not graph.weighted:
        raise UnweightedGraph("weighted_distance needs a weighted graph")
    graph._check(t)
    return dijkstra(graph, s, cost_transform).dist[t]


def shortest_path(graph: Graph, s: int, t: int, metric: str = "hops",
                  cost_transform: str = "reciprocal"):
    """Node sequence from ``s`` to ``t``, or UNREACHABLE.

    Among equally short paths the walk from ``s`` always steps to the
    smallest-id node that still lies on a shortest path.
    """
    graph._check(s)
    graph._check(t)
    if metric == "hops":
        to_t = bfs(graph, t, reverse=True).dist
        step = lambda u, v: 1
        same = lambda a, b: a == b
    elif metric == "cost":
        if not graph.weighted:
            raise UnweightedGraph("cost metric needs a weighted graph")
        cost = _cost_fn(cost_transform)
        to_t = dijkstra(graph, t, cost_transform, reverse=True).dist
        step = lambda u, v: cost(graph.weight(u, v))
        same = _close
    else:
        raise ValueError(f"unknown metric {metric!r}")
    if to_t[s] is UNREACHABLE:
        return UNREACHABLE
    path = [s]
    u = s
    while u != t:
        for v in sorted(graph.successors(u)):
            if to_t[v] is not UNREACHABLE and same(step(u, v) + to_t[v], to_t[u]):
                u = v
                break
        else:  # pragma: no cover - distances guarantee a next step
            raise RuntimeError("shortest-path reconstruction failed")
        path.append(u)
    return path


def path_cost(graph: Graph, path: list[int], cost_transform: str = "reciprocal") -> float:
    cost = _cost_fn(cost_transform)
    return sum(cost(graph.weight(u, v)) for u, v in zip(path, path[1:]))


def distance_matrix(graph: Graph, metric: str = "hops",
                    cost_transform: str = "reciprocal") -> np.ndarray:
    """All-pairs distances by repeated single-source search.

    Unreachable pairs hold ``inf`` in the dense array.
    """
    if metric == "cost" and not graph.weighted:
        raise UnweightedGraph("cost metric needs a weighted graph")
    if metric not in ("hops", "cost"):
        raise ValueError(f"unknown metric {metric!r}")
    out = np.full((graph.n, graph.n), np.inf)
    for s in range(graph.n):
        res = bfs(graph, s) if metric == "hops" else dijkstra(graph, s, cost_transform)
        for t, d in enumerate(res.dist):
            if d is not UNREACHABLE:
                out[s, t] = d
    return out


def diameter(graph: Graph) -> int:
    """Largest finite hop distance (0 for graphs without edges)."""
    best = 0
    for s in range(graph.n):
        finite = [d for d in bfs(graph, s).dist if d is not UNREACHABLE]
        best = max(best, max(finite))
    return best
