import numpy as np
import pytest
from hypothesis import strategies as st

from sociograph.graph import Graph, connected_components

ACCEPTANCE = []


def random_graph(rng, n, p, directed=False, weighted=False, weights=(1, 2, 3, 4, 5)):
    g = Graph(directed)
    for i in range(n):
        g.add_node(f"v{i}")
    for u in range(n):
        for v in range(n) if directed else range(u + 1, n):
            if u != v and rng.random() < p:
                g.add_edge(u, v, float(rng.choice(weights)) if weighted else None)
    return g


def random_connected(rng, n, p, directed=False, weighted=False, strong=False, **kw):
    while True:
        g = random_graph(rng, n, p, directed, weighted, **kw)
        mode = "strong" if strong and directed else "weak"
        if n and connected_components(g, mode).count == 1:
            return g


@st.composite
def graphs(draw, min_n=1, max_n=9, directed=None, weighted=None):
    """Hypothesis strategy for small simple graphs."""
    n = draw(st.integers(min_n, max_n))
    d = draw(st.booleans()) if directed is None else directed
    w = draw(st.booleans()) if weighted is None else weighted
    pairs = [(u, v) for u in range(n) for v in (range(n) if d else range(u + 1, n)) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    g = Graph(d)
    for i in range(n):
        g.add_node(f"n{i}")
    for u, v in chosen:
        weight = draw(st.integers(1, 9)) if w else None
        g.add_edge(u, v, weight)
    return g


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)
