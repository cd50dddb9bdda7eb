from __future__ import annotations

import io

import pytest
from hypothesis import given, settings

from conftest import connected_graphs
from mhbc.errors import (
    DisconnectedGraph,
    DuplicateEdge,
    EmptyGraph,
    MalformedLine,
    NonPositiveWeight,
    SelfLoop,
    SigmaOverflow,
    VertexNotFound,
)
from mhbc.graph import Graph, assert_connected, parse_edge_list, shortest_path_dag
from mhbc.testkit import _all_pairs_distances, generate, shortest_paths


def test_parse_path():
    g = parse_edge_list("a b\nb c")
    assert g.n == 3 and g.m == 2
    assert g.labels == ("a", "b", "c")
    assert not g.weighted


def test_parse_first_appearance_order_and_comments():
    g = parse_edge_list("# header\nz y  # trailing\n\n y x\n")
    assert g.labels == ("z", "y", "x")
    assert g.neighbors(1) == [0, 2]


def test_parse_accepts_stream_and_utf8():
    g = parse_edge_list(io.StringIO("ä ö\nö ü\n"))
    assert g.vertex("ö") == 1


@pytest.mark.parametrize(
    "text, exc, lineno",
    [
        ("a b\na b", DuplicateEdge, 2),
        ("a b\nb a", DuplicateEdge, 2),
        ("a a", SelfLoop, 1),
        ("a b\nc", MalformedLine, 2),
        ("a b c d", MalformedLine, 1),
    ],
)
def test_parse_errors_name_line(text, exc, lineno):
    with pytest.raises(exc) as info:
        parse_edge_list(text)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


def test_parse_weighted():
    g = parse_edge_list("a b 2.5\nb c 1", weighted=True)
    assert g.weighted
    assert g.edges == ((0, 1, 2.5), (1, 2, 1.0))


@pytest.mark.parametrize("w", ["0", "-1", "nan", "inf"])
def test_parse_nonpositive_weight(w):
    with pytest.raises((NonPositiveWeight, MalformedLine)):
        parse_edge_list(f"a b 1\nb c {w}", weighted=True)


def test_parse_weight_column_on_unweighted_graph():
    with pytest.raises(MalformedLine):
        parse_edge_list("a b 2")


def test_parse_empty():
    with pytest.raises(EmptyGraph):
        parse_edge_list("# nothing here\n\n")


def test_error_kinds_are_distinct():
    kinds = {MalformedLine, NonPositiveWeight, SelfLoop, DuplicateEdge, EmptyGraph}
    assert len(kinds) == 5
    for a in kinds:
        for b in kinds - {a}:
            assert not issubclass(a, b)


def test_assert_connected_ok():
    assert_connected(generate("path:3"))
    assert_connected(generate("star:6"))


def test_assert_connected_reports_sizes():
    g = parse_edge_list("a b\nc d")
    with pytest.raises(DisconnectedGraph) as info:
        assert_connected(g)
    assert info.value.component_sizes == [2, 2]


def test_vertex_lookup():
    g = generate("path:3")
    assert g.vertex("b") == 1
    assert g.vertex(2) == 2
    with pytest.raises(VertexNotFound):
        g.vertex("zz")
    with pytest.raises(VertexNotFound):
        shortest_path_dag(g, 7)


# -- shortest-path DAG ------------------------------------------------------


def test_spd_c4():
    g = generate("cycle:4")  # a-b-c-d-a
    dag = shortest_path_dag(g, 0)
    assert dag.sigma[2] == 2
    assert set(dag.preds[2]) == {1, 3}
    assert dag.dist[2] == 2
    # brute force: both a-b-c and a-d-c
    assert sorted(shortest_paths(g, 0, 2)) == [[0, 1, 2], [0, 3, 2]]


def test_spd_p3():
    dag = shortest_path_dag(generate("path:3"), 0)
    assert dag.sigma == (1, 1, 1)
    assert dag.dist == (0, 1, 2)
    assert dag.order == (0, 1, 2)


def test_spd_star_from_leaf():
    g = generate("star:5")
    dag = shortest_path_dag(g, 1)
    for leaf in (2, 3, 4):
        assert dag.dist[leaf] == 2
        assert dag.sigma[leaf] == 1
        assert dag.preds[leaf] == (0,)
        assert shortest_paths(g, 1, leaf) == [[1, 0, leaf]]


def test_spd_weighted_prefers_light_route():
    g = parse_edge_list("a b 1\nb c 1\na c 5", weighted=True)
    dag = shortest_path_dag(g, 0)
    assert dag.dist == (0.0, 1.0, 2.0)
    assert dag.preds[2] == (1,)


def test_spd_weighted_tie_within_tolerance():
    # 0.1 + 0.2 != 0.3 in binary floating point; the relative tolerance makes it a tie.
    g = parse_edge_list("a b 0.1\nb c 0.2\na c 0.3", weighted=True)
    dag = shortest_path_dag(g, 0)
    assert dag.sigma[2] == 2
    assert set(dag.preds[2]) == {0, 1}


def test_sigma_overflow_detected():
    # 65 chained diamonds: 2**65 shortest paths end to end.
    edges, last, nxt = [], 0, 1
    for _ in range(65):
        top, bottom, end = nxt, nxt + 1, nxt + 2
        edges += [(last, top), (last, bottom), (top, end), (bottom, end)]
        last, nxt = end, nxt + 3
    g = Graph.from_edges([str(i) for i in range(nxt)], edges)
    with pytest.raises(SigmaOverflow):
        shortest_path_dag(g, 0)


def test_sigma_just_below_overflow():
    edges, last, nxt = [], 0, 1
    for _ in range(63):
        top, bottom, end = nxt, nxt + 1, nxt + 2
        edges += [(last, top), (last, bottom), (top, end), (bottom, end)]
        last, nxt = end, nxt + 3
    g = Graph.from_edges([str(i) for i in range(nxt)], edges)
    assert shortest_path_dag(g, 0).sigma[last] == 2**63


def _check_dag(g: Graph, s: int) -> None:
    dag = shortest_path_dag(g, s)
    dist = _all_pairs_distances(g)
    assert dag.sigma[s] == 1 and dag.dist[s] == 0
    for v in range(g.n):
        assert dag.dist[v] == pytest.approx(dist[s][v], rel=1e-12)
        # exhaustive enumeration oracle
        assert dag.sigma[v] == len(shortest_paths(g, s, v, dist))
        if v != s:
            assert dag.sigma[v] == sum(dag.sigma[u] for u in dag.preds[v])
        for u in dag.preds[v]:
            assert dag.dist[u] < dag.dist[v]
            w = next(w for x, w in g.adjacency[u] if x == v)
            assert dag.dist[v] == pytest.approx(dag.dist[u] + w, rel=1e-9)
    assert sorted(dag.order) == list(range(g.n))
    assert [dag.dist[v] for v in dag.order] == sorted(dag.dist)


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_n=10))
def test_spd_matches_enumeration(g):
    for s in range(g.n):
        _check_dag(g, s)


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=8, weighted=True))
def test_spd_weighted_matches_enumeration(g):
    for s in range(g.n):
        _check_dag(g, s)


@settings(max_examples=30, deadline=None)
@given(connected_graphs(max_n=10))
def test_spd_deterministic(g):
    for s in range(g.n):
        assert shortest_path_dag(g, s) == shortest_path_dag(g, s)
