"""Undirected graphs, edge-list parsing and shortest-path DAGs.

Vertices are dense indices ``0..n-1``; string labels only matter at the I/O
boundary. Graphs are immutable once built and may be shared between chains.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

from .errors import (
    DisconnectedGraph,
    DuplicateEdge,
    EmptyGraph,
    MalformedLine,
    NonPositiveWeight,
    SelfLoop,
    SigmaOverflow,
    VertexNotFound,
)

SIGMA_MAX = 2**64 - 1
DIST_REL_TOL = 1e-9


@dataclass(frozen=True)
class Graph:
    labels: tuple[str, ...]
    edges: tuple[tuple[int, int, float], ...]
    adjacency: tuple[tuple[tuple[int, float], ...], ...]
    weighted: bool = False
    index: dict[str, int] = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_edges(
        cls,
        labels: Sequence[str],
        edges: Iterable[tuple[int, int] | tuple[int, int, float]],
        weighted: bool = False,
    ) -> Graph:
        """Build a graph from index pairs, rejecting self-loops and multi-edges."""
        n = len(labels)
        if n == 0:
            raise EmptyGraph("graph has no vertices")
        index = {label: i for i, label in enumerate(labels)}
        if len(index) != n:
            raise ValueError("vertex labels must be unique")
        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        out: list[tuple[int, int, float]] = []
        for k, e in enumerate(edges, start=1):
            u, v = int(e[0]), int(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0  # type: ignore[misc]
            if not (0 <= u < n and 0 <= v < n):
                raise VertexNotFound(f"edge {k} references a vertex outside 0..{n - 1}")
            if u == v:
                raise SelfLoop(k, f"self-loop on {labels[u]!r}")
            if not (w > 0 and math.isfinite(w)):
                raise NonPositiveWeight(k, f"weight must be positive and finite, got {w}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DuplicateEdge(k, f"duplicate edge {labels[u]!r}-{labels[v]!r}")
            seen.add(key)
            out.append((u, v, w))
            adj[u].append((v, w))
            adj[v].append((u, w))
        return cls(
            labels=tuple(labels),
            edges=tuple(out),
            adjacency=tuple(tuple(a) for a in adj),
            weighted=weighted,
            index=index,
        )

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertex(self, label: str | int) -> int:
        """Resolve a label (or an in-range index) to a dense index."""
        if isinstance(label, int):
            if 0 <= label < self.n:
                return label
            raise VertexNotFound(f"vertex index {label} not in graph")
        try:
            return self.index[label]
        except KeyError:
            raise VertexNotFound(f"vertex {label!r} not in graph") from None

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> list[int]:
        return [u for u, _ in self.adjacency[v]]


def parse_edge_list(text: str | TextIO, weighted: bool = False) -> Graph:
    """Parse a whitespace-separated edge list.

    Each non-blank line is ``u v`` or ``u v w``; ``#`` starts a comment.
    A third column is only accepted when ``weighted`` is set. Vertex indices
    follow first appearance.
    """
    if not isinstance(text, str):
        text = text.read()
    labels: list[str] = []
    index: dict[str, int] = {}
    seen: dict[tuple[int, int], int] = {}
    edges: list[tuple[int, int, float]] = []

    def intern(label: str) -> int:
        if label not in index:
            index[label] = len(labels)
            labels.append(label)
        return index[label]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 2:
            w = 1.0
        elif len(parts) == 3 and weighted:
            try:
                w = float(parts[2])
            except ValueError:
                raise MalformedLine(lineno, f"weight {parts[2]!r} is not a number") from None
            if not (w > 0 and math.isfinite(w)):
                raise NonPositiveWeight(lineno, f"weight must be positive and finite, got {parts[2]}")
        elif len(parts) == 3:
            raise MalformedLine(lineno, "weight column given but graph is unweighted")
        else:
            raise MalformedLine(lineno, f"expected 'u v' or 'u v w', got {line!r}")
        a, b = parts[0], parts[1]
        if a == b:
            raise SelfLoop(lineno, f"self-loop on {a!r}")
        u, v = intern(a), intern(b)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdge(lineno, f"duplicate edge {a!r}-{b!r} (first on line {seen[key]})")
        seen[key] = lineno
        edges.append((u, v, w))

    if not labels:
        raise EmptyGraph("graph has no edges")
    return Graph.from_edges(labels, edges, weighted=weighted)


def component_sizes(g: Graph) -> list[int]:
    comp = [-1] * g.n
    sizes: list[int] = []
    for start in range(g.n):
        if comp[start] >= 0:
            continue
        cid = len(sizes)
        comp[start] = cid
        size = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            size += 1
            for u, _ in g.adjacency[v]:
                if comp[u] < 0:
                    comp[u] = cid
                    queue.append(u)
        sizes.append(size)
    return sizes


def assert_connected(g: Graph) -> None:
    sizes = component_sizes(g)
    if len(sizes) != 1:
        raise DisconnectedGraph(sizes)


@dataclass(frozen=True)
class ShortestPathDag:
    source: int
    dist: tuple[float, ...]
    sigma: tuple[int, ...]
    preds: tuple[tuple[int, ...], ...]
    order: tuple[int, ...]


def _check_sigma(value: int, v: int) -> int:
    if value > SIGMA_MAX:
        raise SigmaOverflow(f"shortest-path count to vertex {v} exceeds 2**64-1")
    return value


def shortest_path_dag(g: Graph, s: int) -> ShortestPathDag:
    """BFS (unweighted) or Dijkstra (weighted) DAG of all shortest paths from ``s``."""
    if not 0 <= s < g.n:
        raise VertexNotFound(f"source {s} not in graph")
    if g.weighted:
        return _dijkstra_dag(g, s)
    return _bfs_dag(g, s)


def _bfs_dag(g: Graph, s: int) -> ShortestPathDag:
    n = g.n
    dist = [-1] * n
    sigma = [0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    order: list[int] = []
    dist[s] = 0
    sigma[s] = 1
    queue = deque([s])
    while queue:
        v = queue.popleft()
        order.append(v)
        dv = dist[v]
        for w, _ in g.adjacency[v]:
            if dist[w] < 0:
                dist[w] = dv + 1
                queue.append(w)
            if dist[w] == dv + 1:
                sigma[w] = _check_sigma(sigma[w] + sigma[v], w)
                preds[w].append(v)
    return ShortestPathDag(
        source=s,
        dist=tuple(float(d) if d >= 0 else math.inf for d in dist),
        sigma=tuple(sigma),
        preds=tuple(tuple(p) for p in preds),
        order=tuple(order),
    )


def _dijkstra_dag(g: Graph, s: int) -> ShortestPathDag:
    n = g.n
    dist = [math.inf] * n
    sigma = [0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    done = [False] * n
    order: list[int] = []
    dist[s] = 0.0
    sigma[s] = 1
    heap: list[tuple[float, int]] = [(0.0, s)]
    while heap:
        d, v = heapq.heappop(heap)
        if done[v] or d > dist[v]:
            continue
        done[v] = True
        order.append(v)
        for w, wt in g.adjacency[v]:
            if done[w]:
                continue
            nd = d + wt
            if math.isclose(nd, dist[w], rel_tol=DIST_REL_TOL):
                sigma[w] = _check_sigma(sigma[w] + sigma[v], w)
                preds[w].append(v)
            elif nd < dist[w]:
                dist[w] = nd
                sigma[w] = sigma[v]
                preds[w] = [v]
                heapq.heappush(heap, (nd, w))
    return ShortestPathDag(
        source=s,
        dist=tuple(dist),
        sigma=tuple(sigma),
        preds=tuple(tuple(p) for p in preds),
        order=tuple(order),
    )
