"""Node centralities: degree family, eigenvector, Katz, diffusion,
betweenness (hop and cost based) and PageRank.

Walk-based scores on directed graphs credit a node for its *incoming* ties
(eigenvector, Katz, PageRank). Diffusion centrality instead counts the
expected reach of a process started at the node, so it follows outgoing ties.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AlphaTooLarge,
    BadParameters,
    ModeMismatch,
    NoConvergence,
    NotConnected,
    UnweightedGraph,
)
from .graph import Graph, adjacency_matrix, connected_components, is_connected
from .io import ResultDocument, fingerprint
from .paths import UNREACHABLE, dijkstra, diameter


@dataclass
class CentralityScores:
    measure: str
    params: dict
    labels: list[str]
    scores: np.ndarray
    graph: dict = field(default_factory=dict)

    def __getitem__(self, label: str) -> float:
        return float(self.scores[self.labels.index(label)])

    def as_dict(self) -> dict[str, float]:
        return {lab: float(s) for lab, s in zip(self.labels, self.scores)}

    def to_document(self) -> ResultDocument:
        return ResultDocument(self.measure, dict(self.params),
                              [(lab, float(s)) for lab, s in zip(self.labels, self.scores)],
                              dict(self.graph))


def _result(graph: Graph, measure: str, params: dict, scores) -> CentralityScores:
    return CentralityScores(measure, params, graph.labels, np.asarray(scores, dtype=float),
                            fingerprint(graph))


# --- degree ---------------------------------------------------------------------


def degree(graph: Graph, mode: str = "total", weighted: bool = False) -> CentralityScores:
    """Edge count (or weight sum, i.e. strength) per node.

    ``total`` on a directed graph is in + out.
    """
    if mode not in ("total", "in", "out"):
        raise ValueError(f"unknown degree mode {mode!r}")
    if mode != "total" and not graph.directed:
        raise ModeMismatch(f"{mode}-degree needs a directed graph")
    if weighted and not graph.weighted:
        raise ModeMismatch("weighted degree needs a weighted graph")
    scores = []
    for u in range(graph.n):
        succ, pred = graph.successors(u), graph.predecessors(u)
        out = sum(succ.values()) if weighted else len(succ)
        inc = sum(pred.values()) if weighted else len(pred)
        if not graph.directed:
            scores.append(out)
        else:
            scores.append({"in": inc, "out": out, "total": inc + out}[mode])
    return _result(graph, "degree", {"mode": mode, "weighted": weighted}, scores)


# --- spectral measures ----------------------------------------------------------


def _power_iteration(m: np.ndarray, tol: float, max_iter: int) -> tuple[np.ndarray, int]:
    x = np.ones(m.shape[0]) / math.sqrt(m.shape[0])
    for it in range(1, max_iter + 1):
        y = m @ x
        y /= np.linalg.norm(y)
        if np.linalg.norm(y - x) < tol:
            return y, it
        x = y
    raise NoConvergence(f"power iteration did not converge in {max_iter} iterations")


def spectral_radius(graph: Graph, tol: float = 1e-12, max_iter: int = 10000) -> float:
    """Largest eigenvalue modulus of the adjacency matrix.

    Power iteration on A + I; falls back to a dense eigensolve when the
    iteration stalls (reducible matrices, e.g. DAGs, converge very slowly).
    """
    a = adjacency_matrix(graph)
    if graph.n == 0 or not a.any():
        return 0.0
    shifted = a + np.eye(graph.n)
    try:
        x, _ = _power_iteration(shifted, tol, max_iter)
    except NoConvergence:
        return float(np.max(np.abs(np.linalg.eigvals(a))))
    return float(np.linalg.norm(shifted @ x)) - 1.0


def eigenvector_centrality(graph: Graph, tol: float = 1e-10, max_iter: int = 1000,
                           per_component: bool = False) -> CentralityScores:
    """Leading eigenvector of the adjacency matrix, L2-normalised.

    Requires a connected (strongly connected, if directed) graph unless
    ``per_component`` is set, in which case each component is scored on its
    own and normalised separately.
    """
    params = {"tol": tol, "max_iter": max_iter, "per_component": per_component}
    if graph.n == 0:
        raise NotConnected("empty graph")
    if not per_component:
        if not is_connected(graph):
            raise NotConnected("eigenvector centrality needs a connected graph")
        return _result(graph, "eigenvector", params, _eigvec(adjacency_matrix(graph), tol, max_iter))
    comps = connected_components(graph, "strong" if graph.directed else "weak")
    a = adjacency_matrix(graph)
    scores = np.zeros(graph.n)
    for block in comps.blocks():
        idx = np.array(block)
        scores[idx] = _eigvec(a[np.ix_(idx, idx)], tol, max_iter)
    return _result(graph, "eigenvector", params, scores)


def _eigvec(a: np.ndarray, tol: float, max_iter: int) -> np.ndarray:
    # the +I shift keeps the dominant eigenvalue strictly largest in modulus
    # on bipartite graphs without changing the eigenvectors
    x, _ = _power_iteration(a.T + np.eye(a.shape[0]), tol, max_iter)
    return np.abs(x)


def katz_centrality(graph: Graph, alpha: float | None = None, beta: float = 1.0,
                    tol: float = 1e-10, max_iter: int = 100000) -> CentralityScores:
    """Fixed point of ``x = alpha * A^T x + beta``; unnormalised.

    ``alpha`` defaults to 0.85 / spectral radius.
    """
    rho = spectral_radius(graph)
    if alpha is None:
        alpha = 0.85 / rho if rho > 0 else 0.85
    if alpha < 0:
        raise BadParameters("alpha must be nonnegative")
    # rho is an estimate, so treat values within rounding of 1/rho as too large
    if alpha * rho >= 1 - 1e-9:
        raise AlphaTooLarge(f"alpha={alpha} >= 1/spectral radius ({1 / rho:.6g})")
    at = adjacency_matrix(graph).T
    x = np.full(graph.n, float(beta))
    # the map contracts by alpha * rho, so the distance to the fixed point is
    # at most step * c / (1 - c)
    c = alpha * rho
    for _ in range(max_iter):
        y = alpha * (at @ x) + beta
        if np.linalg.norm(y - x) * c / (1.0 - c) < tol:
            x = y
            break
        x = y
    else:
        raise NoConvergence(f"Katz iteration did not converge in {max_iter} iterations")
    return _result(graph, "katz", {"alpha": alpha, "beta": beta}, x)


def diffusion_centrality(graph: Graph, q: float | None = None, T: int | None = None) -> CentralityScores:
    """Expected reach of a process passing along each tie with probability ``q``
    for ``T`` rounds: ``sum_{t=1..T} (qA)^t 1``.

    Defaults: ``q = 1 / spectral radius``, ``T`` = hop diameter.
    """
    if q is None:
        rho = spectral_radius(graph)
        q = 1.0 / rho if rho > 0 else 1.0
    if T is None:
        T = max(1, diameter(graph))
    if not q > 0:
        raise BadParameters("q must be positive")
    if int(T) != T or T < 1:
        raise BadParameters("T must be a positive integer")
    a = adjacency_matrix(graph)
    v = np.ones(graph.n)
    total = np.zeros(graph.n)
    for _ in range(int(T)):
        v = q * (a @ v)
        total += v
    return _result(graph, "diffusion", {"q": q, "T": int(T)}, total)


def pagerank(graph: Graph, damping: float = 0.85, tol: float = 1e-12,
             max_iter: int = 10000) -> CentralityScores:
    """Stationary distribution of a damped random walk with uniform teleport.

    Walkers leave a node along its out-edges in proportion to weight; walkers
    on a node with no out-edges jump to a uniformly random node.
    """
    if not 0 < damping < 1:
        raise BadParameters("damping must lie in (0, 1)")
    n = graph.n
    a = adjacency_matrix(graph)
    out = a.sum(axis=1)
    dangling = out == 0
    p = np.divide(a, out[:, None], out=np.zeros_like(a), where=~dangling[:, None])
    pt = p.T
    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        y = damping * (pt @ x + x[dangling].sum() / n) + (1.0 - damping) / n
        y /= y.sum()
        if np.abs(y - x).sum() < tol:
            x = y
            break
        x = y
    else:
        raise NoConvergence(f"PageRank did not converge in {max_iter} iterations")
    return _result(graph, "pagerank", {"damping": damping, "tol": tol}, x)


# --- betweenness ----------------------------------------------------------------


def _brandes_accumulate(scores, order, pred, sigma, s):
    delta = [0.0] * len(scores)
    for w in reversed(order):
        coeff = (1.0 + delta[w]) / sigma[w]
        for v in pred[w]:
            delta[v] += sigma[v] * coeff
        if w != s:
            scores[w] += delta[w]


def _single_source_hops(graph: Graph, s: int):
    dist = [-1] * graph.n
    sigma = [0] * graph.n
    pred: list[list[int]] = [[] for _ in range(graph.n)]
    order = []
    dist[s] = 0
    sigma[s] = 1
    queue = deque([s])
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in graph.successors(v):
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                pred[w].append(v)
    return order, pred, sigma


def _single_source_cost(graph: Graph, s: int, cost_transform: str):
    res = dijkstra(graph, s, cost_transform)
    reach = [v for v in range(graph.n) if res.dist[v] is not UNREACHABLE]
    order = sorted(reach, key=lambda v: (res.dist[v], v))
    sigma = [0] * graph.n
    sigma[s] = 1
    for v in order:
        if v != s:
            sigma[v] = sum(sigma[u] for u in res.pred[v])
    return order, res.pred, sigma


def _normalize_betweenness(graph: Graph, scores: np.ndarray, normalized: bool) -> np.ndarray:
    n = graph.n
    if not graph.directed:
        scores = scores / 2.0
    if normalized and n > 2:
        pairs = (n - 1) * (n - 2)
        scores = scores / (pairs if graph.directed else pairs / 2)
    return scores


def betweenness(graph: Graph, normalized: bool = False) -> CentralityScores:
    """Hop-shortest-path betweenness (Brandes); endpoints are not credited.

    Normalisation divides by the number of pairs excluding the node:
    (n-1)(n-2)/2 undirected, (n-1)(n-2) directed.
    """
    scores = [0.0] * graph.n
    for s in range(graph.n):
        order, pred, sigma = _single_source_hops(graph, s)
        _brandes_accumulate(scores, order, pred, sigma, s)
    scores = _normalize_betweenness(graph, np.array(scores), normalized)
    return _result(graph, "betweenness", {"normalized": normalized}, scores)


def weighted_betweenness(graph: Graph, cost_transform: str = "reciprocal",
                         normalized: bool = False) -> CentralityScores:
    """Betweenness over least-cost paths, costs derived from tie weights."""
    if not graph.weighted:
        raise UnweightedGraph("weighted betweenness needs a weighted graph")
    scores = [0.0] * graph.n
    for s in range(graph.n):
        order, pred, sigma = _single_source_cost(graph, s, cost_transform)
        _brandes_accumulate(scores, order, pred, sigma, s)
    scores = _normalize_betweenness(graph, np.array(scores), normalized)
    return _result(graph, "weighted_betweenness",
                   {"cost_transform": cost_transform, "normalized": normalized}, scores)


# --- dispatch -------------------------------------------------------------------

MEASURES = {
    "degree": lambda g, **kw: degree(g, "total", **kw),
    "in": lambda g, weighted=False: degree(g, "in", weighted),
    "out": lambda g, weighted=False: degree(g, "out", weighted),
    "strength": lambda g: degree(g, "total", weighted=True),
    "eigenvector": eigenvector_centrality,
    "katz": katz_centrality,
    "diffusion": diffusion_centrality,
    "betweenness": betweenness,
    "weighted_betweenness": weighted_betweenness,
    "pagerank": pagerank,
}


def compute(graph: Graph, measure: str, **params) -> CentralityScores:
    """Run a measure by name (see ``MEASURES``)."""
    try:
        fn = MEASURES[measure]
    except KeyError:
        raise ValueError(f"unknown measure {measure!r}; choose from {sorted(MEASURES)}") from None
    return fn(graph, **params)
