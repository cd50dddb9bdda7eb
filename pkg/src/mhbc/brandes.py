"""Exact dependency scores and betweenness via Brandes accumulation."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import VertexNotFound
from .graph import Graph, ShortestPathDag, assert_connected, shortest_path_dag


@dataclass(frozen=True)
class DependencyVector:
    """Unnormalized dependencies ``delta[v]`` of one source on every vertex."""

    source: int
    delta: tuple[float, ...]

    def __getitem__(self, v: int) -> float:
        return self.delta[v]


@dataclass(frozen=True)
class BetweennessVector:
    """Betweenness normalized by ``1 / (n (n - 1))``."""

    bc: tuple[float, ...]

    def __getitem__(self, v: int) -> float:
        return self.bc[v]

    def __len__(self) -> int:
        return len(self.bc)


def accumulate(dag: ShortestPathDag) -> list[float]:
    sigma = dag.sigma
    delta = [0.0] * len(sigma)
    for w in reversed(dag.order):
        coeff = 1.0 + delta[w]
        sw = sigma[w]
        for v in dag.preds[w]:
            delta[v] += sigma[v] / sw * coeff
    delta[dag.source] = 0.0
    return delta


def dependency_vector(g: Graph, s: int) -> DependencyVector:
    return DependencyVector(source=s, delta=tuple(accumulate(shortest_path_dag(g, s))))


def dependency_on_target(g: Graph, s: int, r: int) -> float:
    """``delta_{s.}(r)``; a full accumulation is needed, there is no cheaper route."""
    if not 0 <= r < g.n:
        raise VertexNotFound(f"target {r} not in graph")
    if s == r:
        if not 0 <= s < g.n:
            raise VertexNotFound(f"source {s} not in graph")
        return 0.0
    return accumulate(shortest_path_dag(g, s))[r]


def dependency_matrix(g: Graph) -> list[tuple[float, ...]]:
    """Row ``s`` holds the dependency vector of source ``s``."""
    return [dependency_vector(g, s).delta for s in range(g.n)]


def exact_betweenness(g: Graph) -> BetweennessVector:
    assert_connected(g)
    n = g.n
    total = [0.0] * n
    for s in range(n):
        delta = accumulate(shortest_path_dag(g, s))
        for v in range(n):
            total[v] += delta[v]
    norm = n * (n - 1)
    if norm == 0:
        return BetweennessVector(bc=(0.0,) * n)
    return BetweennessVector(bc=tuple(t / norm for t in total))


def exact_betweenness_single(g: Graph, r: int) -> float:
    # Same ascending-source summation as exact_betweenness, so results agree bit-for-bit.
    assert_connected(g)
    if not 0 <= r < g.n:
        raise VertexNotFound(f"vertex {r} not in graph")
    n = g.n
    total = 0.0
    for s in range(n):
        total += accumulate(shortest_path_dag(g, s))[r]
    norm = n * (n - 1)
    return total / norm if norm else 0.0
