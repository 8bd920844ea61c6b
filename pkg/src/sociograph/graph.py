"""Simple directed/undirected, weighted/unweighted graphs.

Nodes are dense integer ids ``0..n-1``; labels are for presentation and I/O.
Unweighted edges carry an implicit weight of 1 so every measure has a single
code path.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    DuplicateEdge,
    DuplicateLabel,
    EmptyLabel,
    ModeMismatch,
    NonpositiveWeight,
    SelfLoop,
    UnknownNode,
)


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    weight: Optional[float] = None

    @property
    def value(self) -> float:
        return 1.0 if self.weight is None else self.weight


@dataclass(frozen=True)
class Partition:
    """Assignment of every node to one block (component or community).

    ``assignment[i]`` is the block id of node ``i``; ids are contiguous from 0
    and numbered by first appearance in node-id order.
    """

    assignment: tuple
    modularity: Optional[float] = None

    @property
    def count(self) -> int:
        return max(self.assignment) + 1 if self.assignment else 0

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.count)]
        for node, c in enumerate(self.assignment):
            out[c].append(node)
        return out

    @staticmethod
    def canonical(labels: Sequence) -> tuple:
        """Renumber arbitrary block labels to 0..c-1 by first appearance."""
        remap: dict = {}
        return tuple(remap.setdefault(c, len(remap)) for c in labels)


class Graph:
    def __init__(self, directed: bool = False):
        self.directed = bool(directed)
        self._labels: list[str] = []
        self._index: dict[str, int] = {}
        self._succ: list[dict[int, float]] = []
        self._pred: list[dict[int, float]] = []
        # explicit weights as given; absent key means unweighted edge
        self._explicit: dict[tuple[int, int], float] = {}

    # --- construction -----------------------------------------------------

    def add_node(self, label: str) -> int:
        if not isinstance(label, str) or not label:
            raise EmptyLabel("node label must be a non-empty string")
        if label in self._index:
            raise DuplicateLabel(f"node {label!r} already registered")
        node = len(self._labels)
        self._labels.append(label)
        self._index[label] = node
        self._succ.append({})
        self._pred.append({})
        return node

    def add_edge(self, u: int, v: int, weight: Optional[float] = None) -> None:
        self._check(u)
        self._check(v)
        if u == v:
            raise SelfLoop(f"self-loop on {self._labels[u]!r}")
        if weight is not None:
            weight = float(weight)
            if not (weight > 0) or not math.isfinite(weight):
                raise NonpositiveWeight(f"edge weight must be positive and finite, got {weight}")
        if v in self._succ[u]:
            raise DuplicateEdge(f"edge {self._labels[u]!r}-{self._labels[v]!r} already present")
        w = 1.0 if weight is None else weight
        self._succ[u][v] = w
        self._pred[v][u] = w
        if not self.directed:
            self._succ[v][u] = w
            self._pred[u][v] = w
        if weight is not None:
            self._explicit[self._key(u, v)] = weight

    def node(self, label: str) -> int:
        """Id of the node with this label, registering it if new."""
        if label in self._index:
            return self._index[label]
        return self.add_node(label)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], directed: bool = False,
                   nodes: Iterable[str] = ()) -> "Graph":
        """Build from ``(u, v)`` or ``(u, v, weight)`` label tuples."""
        g = cls(directed)
        for label in nodes:
            g.add_node(label)
        for e in edges:
            u, v = g.node(str(e[0])), g.node(str(e[1]))
            g.add_edge(u, v, e[2] if len(e) > 2 else None)
        return g

    def copy_nodes(self, directed: Optional[bool] = None) -> "Graph":
        """Empty graph sharing this graph's node registry."""
        g = Graph(self.directed if directed is None else directed)
        for label in self._labels:
            g.add_node(label)
        return g

    # --- queries ------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._labels)

    @property
    def m(self) -> int:
        total = sum(len(s) for s in self._succ)
        return total if self.directed else total // 2

    @property
    def weighted(self) -> bool:
        return bool(self._explicit)

    @property
    def labels(self) -> list[str]:
        return list(self._labels)

    def label(self, node: int) -> str:
        self._check(node)
        return self._labels[node]

    def id(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownNode(f"unknown node {label!r}") from None

    def __contains__(self, label) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return self.n

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        w = "weighted" if self.weighted else "unweighted"
        return f"<Graph {kind} {w} n={self.n} m={self.m}>"

    def has_edge(self, u: int, v: int) -> bool:
        self._check(u)
        self._check(v)
        return v in self._succ[u]

    def weight(self, u: int, v: int) -> float:
        """Weight of edge u->v (1 for unweighted edges)."""
        return self._succ[u][v]

    def successors(self, u: int) -> dict[int, float]:
        """Out-neighbours mapped to weights (all neighbours if undirected)."""
        return self._succ[u]

    def predecessors(self, u: int) -> dict[int, float]:
        return self._pred[u]

    def neighbors_undirected(self, u: int) -> set[int]:
        return set(self._succ[u]) | set(self._pred[u])

    def edges(self) -> list[Edge]:
        """Stored edges sorted by (source id, target id).

        Undirected edges are reported once with ``source < target``.
        """
        out = []
        for u in range(self.n):
            for v in sorted(self._succ[u]):
                if not self.directed and v < u:
                    continue
                out.append(Edge(u, v, self._explicit.get((u, v))))
        return out

    def _key(self, u: int, v: int) -> tuple[int, int]:
        if not self.directed and v < u:
            return (v, u)
        return (u, v)

    def _check(self, node) -> None:
        if not isinstance(node, (int, np.integer)) or not 0 <= node < len(self._labels):
            raise UnknownNode(f"unknown node id {node!r}")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.directed == other.directed and self._labels == other._labels
                and self.edges() == other.edges())

    __hash__ = None


def adjacency_matrix(graph: Graph) -> np.ndarray:
    """Dense ``n x n`` matrix with ``A[i, j]`` the weight of edge i->j."""
    a = np.zeros((graph.n, graph.n))
    for u in range(graph.n):
        for v, w in graph.successors(u).items():
            a[u, v] = w
    return a


def edge_list(graph: Graph) -> list[tuple[str, str, float]]:
    labels = graph.labels
    return [(labels[e.source], labels[e.target], e.value) for e in graph.edges()]


def symmetrize(graph: Graph, rule: str = "union") -> Graph:
    """Undirected view of a directed graph.

    ``union`` keeps a tie reported in either direction, ``mutual`` only
    reciprocated ones. Reciprocal weights are averaged.
    """
    if not graph.directed:
        raise ModeMismatch("symmetrize expects a directed graph")
    if rule not in ("union", "mutual"):
        raise ValueError(f"unknown symmetrize rule {rule!r}")
    out = graph.copy_nodes(directed=False)
    weighted = graph.weighted
    for e in graph.edges():
        u, v = e.source, e.target
        back = graph.successors(v).get(u)
        if back is None:
            if rule == "mutual":
                continue
            w = e.value
        else:
            if v < u:
                continue  # handled when visiting (v, u)
            w = (e.value + back) / 2.0
        out.add_edge(u, v, w if weighted else None)
    return out


def binarize(graph: Graph, threshold: float) -> Graph:
    """Keep edges with weight >= threshold, dropping the weights.

    Unweighted graphs are already binary and come back unchanged.
    """
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    out = graph.copy_nodes()
    for e in graph.edges():
        if e.weight is None or e.value >= threshold:
            out.add_edge(e.source, e.target)
    return out


def subgraph(graph: Graph, nodes: Iterable[int]) -> Graph:
    """Induced subgraph; nodes keep their relative id order."""
    keep = sorted(set(nodes))
    for u in keep:
        graph._check(u)
    remap = {u: i for i, u in enumerate(keep)}
    out = Graph(graph.directed)
    for u in keep:
        out.add_node(graph.label(u))
    for e in graph.edges():
        if e.source in remap and e.target in remap:
            out.add_edge(remap[e.source], remap[e.target], e.weight)
    return out


def connected_components(graph: Graph, mode: str = "weak") -> Partition:
    if mode == "strong":
        if not graph.directed:
            raise ModeMismatch("strong components need a directed graph")
        return Partition(Partition.canonical(_tarjan(graph)))
    if mode != "weak":
        raise ValueError(f"unknown component mode {mode!r}")
    comp = [-1] * graph.n
    c = 0
    for s in range(graph.n):
        if comp[s] >= 0:
            continue
        comp[s] = c
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in graph.neighbors_undirected(u):
                if comp[v] < 0:
                    comp[v] = c
                    queue.append(v)
        c += 1
    return Partition(tuple(comp))


def _tarjan(graph: Graph) -> list[int]:
    # iterative Tarjan; returns an (uncanonicalised) component label per node
    index = [-1] * graph.n
    low = [0] * graph.n
    on_stack = [False] * graph.n
    comp = [-1] * graph.n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(graph.n):
        if index[root] >= 0:
            continue
        work = [(root, iter(sorted(graph.successors(root))))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            u, it = work[-1]
            advanced = False
            for v in it:
                if index[v] < 0:
                    index[v] = low[v] = counter
                    counter += 1
                    stack.append(v)
                    on_stack[v] = True
                    work.append((v, iter(sorted(graph.successors(v)))))
                    advanced = True
                    break
                if on_stack[v]:
                    low[u] = min(low[u], index[v])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[u])
            if low[u] == index[u]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == u:
                        break
                ncomp += 1
    return comp


def is_connected(graph: Graph) -> bool:
    """Connected (undirected) or strongly connected (directed)."""
    if graph.n == 0:
        return False
    mode = "strong" if graph.directed else "weak"
    return connected_components(graph, mode).count == 1


def density(graph: Graph) -> float:
    n = graph.n
    if n < 2:
        return 0.0
    pairs = n * (n - 1) if graph.directed else n * (n - 1) / 2
    return graph.m / pairs


def drop_weights(graph: Graph) -> Graph:
    """Same edges, all treated as unweighted."""
    out = graph.copy_nodes()
    for e in graph.edges():
        out.add_edge(e.source, e.target)
    return out
