from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import graphs, random_connected, random_graph
from oracles import dense_adjacency, modularity_sum, set_partitions
from sociograph.community import detect_communities, modularity, move_delta, write_partition
from sociograph.errors import EmptyGraph, ModeMismatch, UnassignedNode
from sociograph.generators import clique_ring, complete, cycle, two_cliques
from sociograph.graph import Graph, Partition

PLANTED = (0,) * 5 + (1,) * 5


def test_single_community_zero(rng):
    for i in range(100):
        g = random_graph(rng, int(rng.integers(2, 15)), 0.3, weighted=bool(i % 2))
        if g.m:
            assert modularity(g, [0] * g.n) == 0


def test_two_cliques_planted():
    q = modularity(two_cliques(5), PLANTED)
    assert abs(q - (20 / 21 - 1 / 2)) <= 1e-12
    assert Fraction(20, 21) - Fraction(1, 2) == Fraction(19, 42)


def test_singletons_regular_graph():
    for g in (cycle(8), complete(5)):
        assert modularity(g, list(range(g.n))) == pytest.approx(
            modularity_sum(g, list(range(g.n))), abs=1e-12)
        assert modularity(g, list(range(g.n))) == pytest.approx(-1 / g.n, abs=1e-12)


def test_modularity_errors():
    with pytest.raises(EmptyGraph):
        modularity(Graph.from_edges([], nodes=["a"]), [0])
    with pytest.raises(ModeMismatch):
        modularity(Graph.from_edges([("a", "b")], directed=True), [0, 0])
    with pytest.raises(UnassignedNode):
        modularity(two_cliques(3), [0, 0])
    with pytest.raises(EmptyGraph):
        detect_communities(Graph.from_edges([], nodes=["a", "b"]))


@settings(max_examples=60)
@given(graphs(min_n=2, directed=False), st.randoms(use_true_random=False))
def test_modularity_matches_double_sum(g, rnd):
    if not g.m:
        return
    comm = [rnd.randrange(3) for _ in range(g.n)]
    q = modularity(g, comm)
    assert q == pytest.approx(modularity_sum(g, comm), abs=1e-12)
    assert -0.5 <= q < 1
    relabel = [(c + 1) % 3 for c in comm]
    assert modularity(g, relabel) == pytest.approx(q, abs=1e-12)


def test_modularity_permutation_invariant(rng):
    g = random_connected(rng, 10, 0.3, weighted=True)
    comm = list(rng.integers(0, 3, g.n))
    perm = rng.permutation(g.n)
    h = Graph()
    for new in range(g.n):
        h.add_node(g.label(int(perm[new])))
    for e in g.edges():
        h.add_edge(h.id(g.label(e.source)), h.id(g.label(e.target)), e.weight)
    hcomm = [comm[int(perm[i])] for i in range(g.n)]
    assert modularity(h, hcomm) == pytest.approx(modularity(g, comm), abs=1e-12)


def _exhaustive_best(graph):
    """Max modularity over every set partition, vectorised over partitions."""
    a = dense_adjacency(graph)
    k = a.sum(axis=1)
    two_m = a.sum()
    b = a - np.outer(k, k) / two_m
    parts = np.array(list(set_partitions(range(graph.n))), dtype=np.int8)
    best_q, best = -np.inf, None
    for chunk in np.array_split(parts, max(1, len(parts) // 20000)):
        same = chunk[:, :, None] == chunk[:, None, :]
        q = (same * b).sum(axis=(1, 2)) / two_m
        i = int(np.argmax(q))
        if q[i] > best_q:
            best_q, best = float(q[i]), tuple(int(x) for x in chunk[i])
    return best_q, best


def test_two_cliques_exhaustive_and_detection():
    g = two_cliques(5)
    best_q, best = _exhaustive_best(g)
    assert Partition.canonical(best) == PLANTED
    assert best_q == pytest.approx(20 / 21 - 1 / 2, abs=1e-12)
    for seed in range(10):
        p = detect_communities(g, seed=seed)
        assert p.assignment == PLANTED
        assert p.modularity == pytest.approx(best_q, abs=1e-12)


def test_complete_graph_single_community():
    p = detect_communities(complete(6), seed=3)
    assert p.count == 1 and p.modularity == 0


def test_ring_of_cliques():
    g = clique_ring(5, 4)
    cliques = [c for c in range(4) for _ in range(5)]
    # exhaustive search over clique-level merges
    merged = []
    for blocks in set_partitions(range(4)):
        comm = [blocks[c] for c in cliques]
        merged.append((modularity_sum(g, comm), Partition.canonical(comm)))
    best_q, best = max(merged)
    p = detect_communities(g, seed=0)
    assert p.count == 4 and p.assignment == best
    assert p.modularity == pytest.approx(best_q, abs=1e-12)
    assert p.modularity > 0.6


def test_detect_deterministic_and_nonnegative(rng):
    for _ in range(15):
        g = random_connected(rng, 25, 0.15, weighted=True)
        p1 = detect_communities(g, seed=7)
        p2 = detect_communities(g, seed=7)
        assert p1 == p2
        assert p1.modularity >= 0
        assert p1.modularity == pytest.approx(modularity(g, p1), abs=1e-12)
        assert sorted(set(p1.assignment)) == list(range(p1.count))


def test_resolution_extremes():
    g = clique_ring(4, 3)
    assert detect_communities(g, resolution=0.0).count == 1
    assert detect_communities(g, resolution=50.0).count > 3


def test_move_delta_matches_recomputation(rng):
    for _ in range(50):
        g = random_connected(rng, 12, 0.3, weighted=True)
        comm = [int(c) for c in rng.integers(0, 4, g.n)]
        node = int(rng.integers(g.n))
        target = int(rng.integers(0, 5))
        for gamma in (1.0, 0.5):
            moved = list(comm)
            moved[node] = target
            want = modularity(g, moved, gamma) - modularity(g, comm, gamma)
            assert abs(move_delta(g, comm, node, target, gamma) - want) <= 1e-12


def test_write_partition():
    g = two_cliques(3)
    text = write_partition(g, detect_communities(g))
    lines = text.splitlines()
    assert lines[0].startswith("# Q=") and lines[1] == "node,community"
    assert lines[2:] == [f"{u},{0 if u < 3 else 1}" for u in range(6)]
