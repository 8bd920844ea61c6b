"""Egocentric views and local brokerage measures.

A k-ego network holds every node within hop distance k of the ego (direction
ignored) and the ties among those alters. The ego's own ties are left out
unless ``include_ego`` is set.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .centrality import betweenness
from .errors import (
    DirectedUnsupported,
    EgoMismatch,
    IsolatedNode,
    MalformedRow,
)
from .graph import Graph, subgraph
from .io import LABEL_RE, format_number, parse_edge_list


@dataclass(frozen=True)
class EgoNetwork:
    graph: Graph  # graph the ego network was taken from
    ego: int
    k: int
    alters: frozenset
    alter_edges: frozenset  # (u, v) id pairs; u < v when undirected
    include_ego: bool = False

    @property
    def ego_label(self) -> str:
        return self.graph.label(self.ego)

    def alter_labels(self) -> set[str]:
        return {self.graph.label(a) for a in self.alters}

    def edge_labels(self) -> set:
        """Alter-alter ties as label pairs (frozensets when undirected)."""
        lab = self.graph.label
        if self.graph.directed:
            return {(lab(u), lab(v)) for u, v in self.alter_edges}
        return {frozenset((lab(u), lab(v))) for u, v in self.alter_edges}

    def members(self) -> list[int]:
        return sorted(self.alters | ({self.ego} if self.include_ego else set()))

    def to_graph(self) -> Graph:
        """Standalone graph of the members (ego ties only when included)."""
        g = subgraph(self.graph, self.members())
        if self.include_ego:
            return g
        out = g.copy_nodes()
        ego_label = self.ego_label
        for e in g.edges():
            if ego_label not in (g.label(e.source), g.label(e.target)):
                out.add_edge(e.source, e.target, e.weight)
        return out


def _hop_ball(graph: Graph, ego: int, k: int) -> dict[int, int]:
    dist = {ego: 0}
    queue = deque([ego])
    while queue:
        u = queue.popleft()
        if dist[u] == k:
            continue
        for v in sorted(graph.neighbors_undirected(u)):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def extract_ego(graph: Graph, ego: int, k: int = 1, include_ego: bool = False) -> EgoNetwork:
    graph._check(ego)
    if int(k) != k or k < 1:
        raise ValueError("k must be a positive integer")
    alters = frozenset(_hop_ball(graph, ego, k)) - {ego}
    edges = frozenset((e.source, e.target) for e in graph.edges()
                      if e.source in alters and e.target in alters)
    return EgoNetwork(graph, ego, int(k), alters, edges, include_ego)


def egocentric_betweenness(graph: Graph, ego: int) -> float:
    """Betweenness of the ego inside its own 1-ego network (ego included)."""
    net = extract_ego(graph, ego, 1, include_ego=True)
    g = net.to_graph()
    return float(betweenness(g)[graph.label(ego)])


@dataclass(frozen=True)
class EgoComparison:
    edge_precision: float
    edge_recall: float
    jaccard: float
    unmatched_reported: int  # alters named only in the reported network
    unmatched_extracted: int


def compare_ego(reported: EgoNetwork, extracted: EgoNetwork) -> EgoComparison:
    """Agreement of a self-reported ego network with one extracted from data.

    Only alters present in both networks are compared. Empty edge sets count
    as perfectly precise (and perfectly recalled), so the result is always
    defined.
    """
    if reported.ego_label != extracted.ego_label:
        raise EgoMismatch(f"egos differ: {reported.ego_label!r} vs {extracted.ego_label!r}")
    ra, ea = reported.alter_labels(), extracted.alter_labels()
    shared = ra & ea

    def restrict(edges):
        return {e for e in edges if set(e) <= shared}

    r = restrict(reported.edge_labels())
    e = restrict(extracted.edge_labels())
    both = len(r & e)
    return EgoComparison(
        edge_precision=both / len(r) if r else 1.0,
        edge_recall=both / len(e) if e else 1.0,
        jaccard=both / len(r | e) if (r | e) else 1.0,
        unmatched_reported=len(ra - shared),
        unmatched_extracted=len(ea - shared),
    )


def local_clustering(graph: Graph, node: int) -> float:
    """Fraction of neighbour pairs that are themselves tied (0 below degree 2)."""
    if graph.directed:
        raise DirectedUnsupported("local clustering is defined here for undirected graphs")
    graph._check(node)
    nbrs = sorted(graph.successors(node))
    k = len(nbrs)
    if k < 2:
        return 0.0
    links = sum(1 for a, b in combinations(nbrs, 2) if b in graph.successors(a))
    return links / (k * (k - 1) / 2)


def constraint(graph: Graph, node: int) -> float:
    """Burt's constraint: how much of a node's tie investment is redundant.

    Uses ``p_ij = (w_ij + w_ji) / sum_k (w_ik + w_ki)`` so directed and
    weighted ties are handled uniformly.
    """
    graph._check(node)
    nbrs = graph.neighbors_undirected(node)
    if not nbrs:
        raise IsolatedNode(f"{graph.label(node)} has no ties")

    def mutual(a, b):
        return graph.successors(a).get(b, 0.0) + graph.successors(b).get(a, 0.0)

    cache: dict[int, float] = {}

    def p(a, b):
        if a not in cache:
            cache[a] = sum(mutual(a, c) for c in graph.neighbors_undirected(a))
        return mutual(a, b) / cache[a]

    total = 0.0
    for j in nbrs:
        indirect = sum(p(node, q) * p(q, j) for q in nbrs
                       if q != j and j in graph.neighbors_undirected(q))
        total += (p(node, j) + indirect) ** 2
    return total


# --- serialisation ----------------------------------------------------------------


def write_ego(net: EgoNetwork) -> str:
    """Edge-list CSV preceded by ``# ego=<label> k=<k>`` and an alter roster."""
    g = net.to_graph()
    labels = g.labels
    lines = [f"# ego={net.ego_label} k={net.k}",
             "# alters=" + ",".join(sorted(net.alter_labels()))]
    weighted = g.weighted
    lines.append("source,target,weight" if weighted else "source,target")
    for e in g.edges():
        row = f"{labels[e.source]},{labels[e.target]}"
        lines.append(row + f",{format_number(e.value)}" if weighted else row)
    return "\n".join(lines) + "\n"


def parse_ego(text: str, directed: bool = False) -> EgoNetwork:
    """Read a (typically self-reported) ego network written by ``write_ego``.

    Without an ``# alters=`` line the alters are the non-ego edge endpoints.
    """
    ego_label, k, alters = None, 1, None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("# ego="):
            for part in line[2:].split():
                key, _, value = part.partition("=")
                if key == "ego":
                    ego_label = value
                elif key == "k":
                    k = int(value)
        elif line.startswith("# alters="):
            alters = [a for a in line[len("# alters="):].split(",") if a]
            for a in alters:
                if not LABEL_RE.match(a):
                    raise MalformedRow(f"bad alter label {a!r}", lineno)
    if ego_label is None:
        raise MalformedRow("missing '# ego=<label>' header")
    g = parse_edge_list(text, directed)
    for a in alters or ():
        g.node(a)
    ego = g.node(ego_label)
    alter_ids = frozenset(g.id(a) for a in alters) if alters is not None \
        else frozenset(range(g.n)) - {ego}
    edges = frozenset((e.source, e.target) for e in g.edges()
                      if e.source in alter_ids and e.target in alter_ids)
    include = any(ego in (e.source, e.target) for e in g.edges())
    return EgoNetwork(g, ego, k, alter_ids, edges, include)
