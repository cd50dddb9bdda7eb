from __future__ import annotations

import pytest
from hypothesis import strategies as st

from mhbc.graph import Graph
from mhbc.testkit import generate, vertex_labels


@pytest.fixture
def p3() -> Graph:
    return generate("path:3")


@pytest.fixture
def p4() -> Graph:
    return generate("path:4")


@pytest.fixture
def c4() -> Graph:
    return generate("cycle:4")


@pytest.fixture
def star5() -> Graph:
    return generate("star:5")


@st.composite
def connected_graphs(draw, min_n: int = 2, max_n: int = 9, weighted: bool = False) -> Graph:
    """Random spanning tree plus random extra edges."""
    n = draw(st.integers(min_n, max_n))
    edges = set()
    for v in range(1, n):
        u = draw(st.integers(0, v - 1))
        edges.add((u, v))
    extra = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    if extra:
        edges |= set(draw(st.lists(st.sampled_from(extra), unique=True, max_size=len(extra))))
    edges = sorted(edges)
    if weighted:
        ws = draw(st.lists(st.sampled_from([1.0, 2.0, 3.0, 0.5]), min_size=len(edges), max_size=len(edges)))
        return Graph.from_edges(vertex_labels(n), [(u, v, w) for (u, v), w in zip(edges, ws)], weighted=True)
    return Graph.from_edges(vertex_labels(n), edges)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
