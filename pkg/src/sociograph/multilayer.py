"""Multilayer and multiplex networks.

Every layer keeps a full copy of the global node registry (so node ids agree
across layers) plus an explicit set of the nodes present in it. Interlayer
edges join (node, layer) pairs in different layers. A multiplex network is
the special case where layers share their nodes and interlayer edges only
join a node to itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import centrality
from .errors import (
    DuplicateEdge,
    DuplicateLabel,
    EmptyLabel,
    GraphError,
    MalformedRow,
    MultiplexViolation,
    NodeAbsentFromLayer,
    NonpositiveWeight,
    RegistryMismatch,
    SameLayerInterlayer,
    UnknownNode,
)
from .graph import Graph, adjacency_matrix, subgraph
from .io import LABEL_RE, _number, _rows, format_number


@dataclass(frozen=True, order=True)
class NodeLayer:
    node: int
    layer: int


class MultilayerNetwork:
    def __init__(self, directed: bool = False):
        self.directed = directed
        self._nodes = Graph(directed)  # registry only, never holds edges
        self._layer_labels: list[str] = []
        self._layer_index: dict[str, int] = {}
        self._layers: list[Graph] = []
        self._presence: list[set[int]] = []
        self._inter: dict[tuple[NodeLayer, NodeLayer], Optional[float]] = {}

    # --- registries -------------------------------------------------------------

    def add_node(self, label: str) -> int:
        u = self._nodes.add_node(label)
        for g in self._layers:
            g.add_node(label)
        return u

    def node(self, label: str) -> int:
        return self._nodes.id(label) if label in self._nodes else self.add_node(label)

    def add_layer(self, label: str) -> int:
        if not isinstance(label, str) or not label:
            raise EmptyLabel("layer label must be a non-empty string")
        if label in self._layer_index:
            raise DuplicateLabel(f"layer {label!r} already exists")
        lid = len(self._layers)
        self._layer_labels.append(label)
        self._layer_index[label] = lid
        self._layers.append(self._nodes.copy_nodes())
        self._presence.append(set())
        return lid

    def layer(self, label: str) -> int:
        try:
            return self._layer_index[label]
        except KeyError:
            raise UnknownNode(f"unknown layer {label!r}") from None

    def declare_presence(self, node: int, layer: int) -> None:
        self._nodes._check(node)
        self._check_layer(layer)
        self._presence[layer].add(node)

    def _check_layer(self, layer: int) -> None:
        if not 0 <= layer < len(self._layers):
            raise UnknownNode(f"unknown layer id {layer!r}")

    def _require(self, node: int, layer: int) -> None:
        self._nodes._check(node)
        self._check_layer(layer)
        if node not in self._presence[layer]:
            raise NodeAbsentFromLayer(
                f"{self.node_labels[node]} is not present in layer {self._layer_labels[layer]}")

    # --- edges -------------------------------------------------------------------

    def add_intralayer_edge(self, layer: int, u: int, v: int,
                            weight: Optional[float] = None) -> None:
        self._require(u, layer)
        self._require(v, layer)
        self._layers[layer].add_edge(u, v, weight)

    def add_interlayer_edge(self, a: tuple, b: tuple, weight: Optional[float] = None) -> None:
        a, b = NodeLayer(*a), NodeLayer(*b)
        self._require(a.node, a.layer)
        self._require(b.node, b.layer)
        if a.layer == b.layer:
            raise SameLayerInterlayer("interlayer edge endpoints must be in different layers")
        if weight is not None and not weight > 0:
            raise NonpositiveWeight(f"edge weight must be positive, got {weight}")
        key = (a, b) if self.directed or a < b else (b, a)
        if key in self._inter:
            raise DuplicateEdge("interlayer edge already present")
        self._inter[key] = None if weight is None else float(weight)

    # --- views ---------------------------------------------------------------------

    @property
    def node_labels(self) -> list[str]:
        return self._nodes.labels

    @property
    def layer_labels(self) -> list[str]:
        return list(self._layer_labels)

    @property
    def n_layers(self) -> int:
        return len(self._layers)

    def presence(self, layer: int) -> frozenset:
        return frozenset(self._presence[layer])

    def layer_graph(self, layer: int, present_only: bool = False) -> Graph:
        """Intralayer graph over the global registry, or only present nodes."""
        self._check_layer(layer)
        g = self._layers[layer]
        return subgraph(g, self._presence[layer]) if present_only else g

    def interlayer_edges(self) -> list[tuple[NodeLayer, NodeLayer, Optional[float]]]:
        return [(a, b, w) for (a, b), w in sorted(self._inter.items())]

    def node_layers(self) -> list[NodeLayer]:
        """Supra-adjacency index order: by layer, then node id."""
        return [NodeLayer(u, lid) for lid in range(self.n_layers)
                for u in sorted(self._presence[lid])]


class MultiplexNetwork(MultilayerNetwork):
    """Layers over one shared node set with diagonal interlayer coupling only."""

    def add_node(self, label: str) -> int:
        u = super().add_node(label)
        for p in self._presence:
            p.add(u)
        return u

    def add_layer(self, label: str) -> int:
        lid = super().add_layer(label)
        self._presence[lid] = set(range(self._nodes.n))
        return lid

    def add_interlayer_edge(self, a: tuple, b: tuple, weight: Optional[float] = None) -> None:
        if NodeLayer(*a).node != NodeLayer(*b).node:
            raise MultiplexViolation("multiplex interlayer edges must join a node to itself")
        super().add_interlayer_edge(a, b, weight)


def supra_adjacency(mln: MultilayerNetwork, omega: Optional[float] = None,
                    coupling: str = "all_pairs") -> np.ndarray:
    """Block matrix: intralayer adjacencies on the diagonal, interlayer
    weights off it. Rows follow ``mln.node_layers()``.

    ``omega`` adds uniform diagonal coupling between copies of the same node,
    either across all layer pairs or only consecutive layers (``chain``).
    """
    if coupling not in ("all_pairs", "chain"):
        raise ValueError(f"unknown coupling {coupling!r}")
    if omega is not None and not omega > 0:
        raise NonpositiveWeight("omega must be positive")
    index = {nl: i for i, nl in enumerate(mln.node_layers())}
    s = np.zeros((len(index), len(index)))
    for lid in range(mln.n_layers):
        present = sorted(mln.presence(lid))
        rows = [index[NodeLayer(u, lid)] for u in present]
        a = adjacency_matrix(mln.layer_graph(lid))
        s[np.ix_(rows, rows)] = a[np.ix_(present, present)]
    for a, b, w in mln.interlayer_edges():
        w = 1.0 if w is None else w
        s[index[a], index[b]] += w
        if not mln.directed:
            s[index[b], index[a]] += w
    if omega is not None:
        for la in range(mln.n_layers):
            partners = [la + 1] if coupling == "chain" else range(la + 1, mln.n_layers)
            for lb in partners:
                if lb >= mln.n_layers:
                    continue
                for u in mln.presence(la) & mln.presence(lb):
                    i, j = index[NodeLayer(u, la)], index[NodeLayer(u, lb)]
                    s[i, j] += omega
                    s[j, i] += omega
    return s


def aggregate(mpx: MultilayerNetwork, rule: str = "sum") -> Graph:
    """Collapse layers into one graph over the shared registry.

    ``sum`` adds an edge's weights across layers; ``union`` keeps an
    unweighted edge wherever any layer has one.
    """
    if rule not in ("sum", "union"):
        raise ValueError(f"unknown aggregation rule {rule!r}")
    totals: dict[tuple[int, int], float] = {}
    any_weighted = False
    for lid in range(mpx.n_layers):
        g = mpx.layer_graph(lid)
        any_weighted |= g.weighted
        for e in g.edges():
            key = (e.source, e.target)
            totals[key] = totals.get(key, 0.0) + e.value
    out = Graph(mpx.directed)
    for label in mpx.node_labels:
        out.add_node(label)
    weighted = rule == "sum" and (any_weighted or any(w != 1 for w in totals.values()))
    for (u, v), w in sorted(totals.items()):
        out.add_edge(u, v, w if weighted else None)
    return out


def temporal_from_snapshots(graphs: list[Graph], coupling: float = 1.0,
                            labels: Optional[list[str]] = None) -> MultiplexNetwork:
    """One layer per snapshot, each node coupled to itself at the next time."""
    if not graphs:
        raise ValueError("need at least one snapshot")
    first = graphs[0]
    for g in graphs[1:]:
        if g.labels != first.labels or g.directed != first.directed:
            raise RegistryMismatch("snapshots must share one node registry and directedness")
    mpx = MultiplexNetwork(first.directed)
    for label in first.labels:
        mpx.add_node(label)
    labels = labels or [f"t{t}" for t in range(len(graphs))]
    for t, g in enumerate(graphs):
        lid = mpx.add_layer(labels[t])
        for e in g.edges():
            mpx.add_intralayer_edge(lid, e.source, e.target, e.weight)
    for t in range(len(graphs) - 1):
        for u in range(first.n):
            mpx.add_interlayer_edge((u, t), (u, t + 1), coupling)
    return mpx


def per_layer_measure(mln: MultilayerNetwork, measure: str, **params) -> dict:
    """Run one monolayer measure on every layer (present nodes only)."""
    return {mln.layer_labels[lid]: centrality.compute(mln.layer_graph(lid, present_only=True),
                                                     measure, **params)
            for lid in range(mln.n_layers)}


# --- file format ---------------------------------------------------------------------

HEADER = "node_a,layer_a,node_b,layer_b,weight"


def parse_multilayer(text: str, directed: bool = False,
                     multiplex: bool = False) -> MultilayerNetwork:
    """Rows with ``layer_a == layer_b`` are intralayer ties, the rest interlayer.

    Layers and nodes are registered in first-appearance order; a node is
    present in every layer it appears in (every layer, for multiplex input).
    """
    mln = MultiplexNetwork(directed) if multiplex else MultilayerNetwork(directed)
    rows = _rows(text)
    try:
        lineno, header = next(rows)
    except StopIteration:
        raise MalformedRow("missing header line") from None
    if ",".join(header) != HEADER:
        raise MalformedRow(f"expected header {HEADER!r}", lineno)
    parsed = []
    for lineno, fields in rows:
        if len(fields) != 5:
            raise MalformedRow(f"expected 5 fields, got {len(fields)}", lineno)
        for f in fields[:4]:
            if not LABEL_RE.match(f):
                raise MalformedRow(f"bad label {f!r}", lineno)
        parsed.append((lineno, fields[:4], _number(fields[4], lineno)))
    # register everything first so multiplex presence covers later nodes too
    for _, (na, la, nb, lb), _ in parsed:
        for node, layer in ((na, la), (nb, lb)):
            if layer not in mln._layer_index:
                mln.add_layer(layer)
            if node not in mln._nodes:
                mln.add_node(node)
            mln.declare_presence(mln.node(node), mln.layer(layer))
    for lineno, (na, la, nb, lb), w in parsed:
        u, v = mln.node(na), mln.node(nb)
        w = None if w == 1 else w
        try:
            if la == lb:
                mln.add_intralayer_edge(mln.layer(la), u, v, w)
            else:
                mln.add_interlayer_edge((u, mln.layer(la)), (v, mln.layer(lb)), w)
        except GraphError as exc:
            exc.args = (f"line {lineno}: {exc}",)
            raise
    return mln


def write_multilayer(mln: MultilayerNetwork) -> str:
    nodes, layers = mln.node_labels, mln.layer_labels
    lines = [HEADER]
    for lid in range(mln.n_layers):
        for e in mln.layer_graph(lid).edges():
            lines.append(f"{nodes[e.source]},{layers[lid]},{nodes[e.target]},{layers[lid]},"
                         f"{format_number(e.value)}")
    for a, b, w in mln.interlayer_edges():
        lines.append(f"{nodes[a.node]},{layers[a.layer]},{nodes[b.node]},{layers[b.layer]},"
                     f"{format_number(1.0 if w is None else w)}")
    return "\n".join(lines) + "\n"
