"""Deterministic fixtures and seeded random graph models.

Random models draw from numpy's PCG64 generator (``RNG_ALGORITHM``) seeded
with the given integer, so the same seed always yields the same edge list.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import BadParameters, SizeTooSmall
from .graph import Graph

RNG_ALGORITHM = "numpy-pcg64"


def make_rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


# --- fixtures -------------------------------------------------------------------


def _need(n, least):
    if n < least:
        raise SizeTooSmall(f"size must be at least {least}, got {n}")


def star(n: int) -> Graph:
    """Node 0 tied to nodes 1..n-1."""
    _need(n, 2)
    return Graph.from_edges([("0", str(i)) for i in range(1, n)], nodes=map(str, range(n)))


def complete(n: int) -> Graph:
    _need(n, 2)
    return Graph.from_edges([(str(i), str(j)) for i, j in combinations(range(n), 2)],
                            nodes=map(str, range(n)))


def path(n: int) -> Graph:
    _need(n, 2)
    return Graph.from_edges([(str(i), str(i + 1)) for i in range(n - 1)],
                            nodes=map(str, range(n)))


def cycle(n: int) -> Graph:
    _need(n, 3)
    return Graph.from_edges([(str(i), str((i + 1) % n)) for i in range(n)],
                            nodes=map(str, range(n)))


def two_cliques(k: int) -> Graph:
    """Two k-cliques (nodes 0..k-1 and k..2k-1) joined by the edge (k-1, k)."""
    _need(k, 3)
    return clique_ring(k, 2)


def clique_ring(k: int, count: int) -> Graph:
    """``count`` k-cliques, clique c's last node tied to clique c+1's first.

    The ring is closed when there are more than two cliques.
    """
    _need(k, 3)
    _need(count, 2)
    edges = []
    for c in range(count):
        base = c * k
        edges += [(str(base + i), str(base + j)) for i, j in combinations(range(k), 2)]
    bridges = count if count > 2 else 1
    for c in range(bridges):
        edges.append((str(c * k + k - 1), str(((c + 1) % count) * k)))
    return Graph.from_edges(edges, nodes=map(str, range(k * count)))


KITE_EDGES = [
    ("Andre", "Beverly"), ("Andre", "Carol"), ("Andre", "Diane"), ("Andre", "Fernando"),
    ("Beverly", "Diane"), ("Beverly", "Ed"), ("Beverly", "Garth"),
    ("Carol", "Diane"), ("Carol", "Fernando"),
    ("Diane", "Ed"), ("Diane", "Fernando"), ("Diane", "Garth"),
    ("Ed", "Garth"),
    ("Fernando", "Garth"), ("Fernando", "Heather"),
    ("Garth", "Heather"),
    ("Heather", "Ike"),
    ("Ike", "Jane"),
]


def kite10() -> Graph:
    """Krackhardt's kite: a dense cluster, a bridge (Heather) and a tail."""
    return Graph.from_edges(KITE_EDGES)


def sam_star() -> Graph:
    """Weighted star around Sam: Felix 2, Dave 5, Sarah 1."""
    return Graph.from_edges([("Felix", "Sam", 2), ("Sam", "Dave", 5), ("Sarah", "Sam", 1)])


FIXTURES = {"star": star, "complete": complete, "path": path, "cycle": cycle,
            "two_cliques": two_cliques, "kite10": kite10, "sam_star": sam_star}


# --- random models ----------------------------------------------------------------


def watts_strogatz(n: int, k: int, p: float, seed=None) -> Graph:
    """Ring lattice (each node tied to its k nearest neighbours) with every
    edge's far end rewired with probability ``p``.

    A rewired end is redrawn until it avoids self-loops and duplicates; a
    node already tied to everyone keeps its edge.
    """
    if k % 2 or not 2 <= k < n or not 0 <= p <= 1:
        raise BadParameters("need even k with 2 <= k < n and 0 <= p <= 1")
    rng = make_rng(seed)
    adj = [set() for _ in range(n)]
    for u in range(n):
        for j in range(1, k // 2 + 1):
            v = (u + j) % n
            adj[u].add(v)
            adj[v].add(u)
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            if v not in adj[u] or rng.random() >= p:
                continue
            if len(adj[u]) >= n - 1:
                continue
            while True:
                w = int(rng.integers(n))
                if w != u and w not in adj[u]:
                    break
            adj[u].discard(v)
            adj[v].discard(u)
            adj[u].add(w)
            adj[w].add(u)
    g = Graph()
    for i in range(n):
        g.add_node(str(i))
    for u in range(n):
        for v in sorted(adj[u]):
            if u < v:
                g.add_edge(u, v)
    return g


@dataclass(frozen=True)
class GridGeometry:
    """Node ``i`` sits at ``coords[i] = (row, col)`` on a side x side lattice.

    On a torus, distances wrap around both axes.
    """

    side: int
    coords: tuple
    torus: bool = False

    @classmethod
    def square(cls, side: int, torus: bool = False) -> "GridGeometry":
        return cls(side, tuple((r, c) for r in range(side) for c in range(side)), torus)

    def distance(self, u: int, v: int) -> int:
        (r1, c1), (r2, c2) = self.coords[u], self.coords[v]
        dr, dc = abs(r1 - r2), abs(c1 - c2)
        if self.torus:
            dr, dc = min(dr, self.side - dr), min(dc, self.side - dc)
        return dr + dc

    def to_csv(self, labels: list[str]) -> str:
        lines = [f"# side={self.side} torus={int(self.torus)}", "node,row,col"]
        lines += [f"{labels[i]},{r},{c}" for i, (r, c) in enumerate(self.coords)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str, graph: Graph) -> "GridGeometry":
        from .io import _number, _rows

        side, torus = None, False
        for raw in text.splitlines():
            if raw.startswith("# side="):
                fields = dict(part.split("=", 1) for part in raw[2:].split())
                side, torus = int(fields["side"]), fields.get("torus") == "1"
        rows = list(_rows(text))
        if not rows or rows[0][1] != ["node", "row", "col"]:
            raise BadParameters("geometry file must start with node,row,col")
        coords = [None] * graph.n
        for lineno, fields in rows[1:]:
            coords[graph.id(fields[0])] = (int(_number(fields[1], lineno)),
                                           int(_number(fields[2], lineno)))
        if any(c is None for c in coords):
            raise BadParameters("geometry does not cover every node")
        if side is None:
            side = max(max(r, c) for r, c in coords) + 1
        return cls(side, tuple(coords), torus)


def kleinberg_grid(side: int, r: float, q: int = 1, seed=None,
                   torus: bool = True) -> tuple[Graph, GridGeometry]:
    """Directed lattice with ``q`` long-range contacts per node.

    Every node links to its 4 lattice neighbours (wrapping around on the
    torus; fewer on the border otherwise) and to ``q`` further distinct
    nodes, each drawn with probability proportional to ``d ** -r`` where
    ``d`` is lattice distance. Contacts already linked are excluded.
    """
    if side < 2 or r < 0 or q < 0 or int(q) != q:
        raise BadParameters("need side >= 2, r >= 0 and integer q >= 0")
    n = side * side
    rng = make_rng(seed)
    geo = GridGeometry.square(side, torus)
    g = Graph(directed=True)
    for rr, cc in geo.coords:
        g.add_node(f"{rr}_{cc}")
    for u in range(n):
        rr, cc = geo.coords[u]
        for dr, dc in ((-1, 0), (0, -1), (0, 1), (1, 0)):
            r2, c2 = rr + dr, cc + dc
            if torus:
                r2, c2 = r2 % side, c2 % side
            elif not (0 <= r2 < side and 0 <= c2 < side):
                continue
            v = r2 * side + c2
            if v != u and v not in g.successors(u):  # side 2 tori repeat neighbours
                g.add_edge(u, v)
    if q:
        (_torus_contacts if torus else _bounded_contacts)(g, geo, r, int(q), rng)
    return g, geo


def _torus_contacts(g: Graph, geo: GridGeometry, r: float, q: int, rng) -> None:
    # On a torus the contact law is the same for every node up to translation,
    # so one table over offsets serves all nodes. Sampling from it and
    # rejecting contacts the node already has is the same law as renormalising
    # over the remaining cells.
    side, n = geo.side, g.n
    dr = np.minimum(np.arange(side), side - np.arange(side))
    d = (dr[:, None] + dr[None, :]).ravel()
    weight = np.zeros(side * side)
    weight[d > 0] = d[d > 0].astype(float) ** -float(r)
    cdf = np.cumsum(weight)
    rows, cols = np.divmod(np.arange(n), side)
    for u in range(n):
        if q > n - 1 - len(g.successors(u)):
            raise BadParameters("q exceeds the number of cells available as contacts")
    pending = list(range(n))
    for _ in range(q):
        while pending:
            off = np.searchsorted(cdf, rng.random(len(pending)) * cdf[-1], side="right")
            off = np.minimum(off, len(cdf) - 1)
            retry = []
            for u, o in zip(pending, off.tolist()):
                orow, ocol = divmod(o, side)
                v = int((rows[u] + orow) % side * side + (cols[u] + ocol) % side)
                if v in g.successors(u):
                    retry.append(u)
                else:
                    g.add_edge(u, v)
            pending = retry
        pending = list(range(n))


def _bounded_contacts(g: Graph, geo: GridGeometry, r: float, q: int, rng) -> None:
    side, n = geo.side, g.n
    rows = np.repeat(np.arange(side), side)
    cols = np.tile(np.arange(side), side)
    for u in range(n):
        d = np.abs(rows - rows[u]) + np.abs(cols - cols[u])
        weight = np.zeros(n)
        mask = d > 0
        weight[mask] = d[mask].astype(float) ** -float(r)
        weight[list(g.successors(u))] = 0.0
        if q > np.count_nonzero(weight):
            raise BadParameters("q exceeds the number of cells available as contacts")
        for _ in range(q):
            v = int(rng.choice(n, p=weight / weight.sum()))
            g.add_edge(u, v)
            weight[v] = 0.0
