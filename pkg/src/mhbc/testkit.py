"""Ground truth for the samplers: brute-force betweenness, graph generators,
exact MH transition kernels and seeded coverage experiments."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .brandes import BetweennessVector, dependency_matrix, exact_betweenness_single
from .errors import GeneratorError, InputError, TooLarge
from .graph import DIST_REL_TOL, Graph, assert_connected, component_sizes
from .joint import (
    _check_set,
    joint_chain_length,
    relative_bc_estimate,
    relative_bc_exact,
    required_samples_joint,
    run_joint_chain,
)
from .single import ChainConfig, clamped_ratio, estimate_bc, mu_exact, required_samples, run_chain

BRUTE_FORCE_MAX_N = 12
KERNEL_SINGLE_MAX_N = 8
KERNEL_JOINT_MAX_STATES = 32
GNP_MAX_RETRIES = 1000


# -- brute force ------------------------------------------------------------


def _all_pairs_distances(g: Graph) -> list[list[float]]:
    n = g.n
    d = [[math.inf] * n for _ in range(n)]
    for v in range(n):
        d[v][v] = 0.0
    for u, v, w in g.edges:
        w = w if g.weighted else 1.0
        d[u][v] = d[v][u] = min(d[u][v], w)
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == math.inf:
                continue
            di = d[i]
            for j in range(n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return d


def shortest_paths(g: Graph, s: int, t: int, dist: list[list[float]] | None = None) -> list[list[int]]:
    """Every shortest s-t path as an explicit vertex list (Floyd-Warshall + DFS)."""
    if dist is None:
        dist = _all_pairs_distances(g)
    target = dist[s][t]
    paths: list[list[int]] = []
    path = [s]

    def extend(u: int, length: float) -> None:
        if u == t:
            paths.append(list(path))
            return
        for v, w in g.adjacency[u]:
            w = w if g.weighted else 1.0
            step = length + w
            # v lies on a shortest s-t path iff both halves are tight.
            if math.isclose(step, dist[s][v], rel_tol=DIST_REL_TOL, abs_tol=0.0) and math.isclose(
                step + dist[v][t], target, rel_tol=DIST_REL_TOL, abs_tol=0.0
            ):
                path.append(v)
                extend(v, step)
                path.pop()

    if s == t:
        return [[s]]
    extend(s, 0.0)
    return paths


def brute_force_betweenness(g: Graph) -> BetweennessVector:
    """Betweenness by enumerating every shortest path of every ordered pair."""
    if g.n > BRUTE_FORCE_MAX_N:
        raise TooLarge(f"brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got {g.n}")
    assert_connected(g)
    n = g.n
    dist = _all_pairs_distances(g)
    total = [0.0] * n
    for s in range(n):
        for t in range(n):
            if s == t:
                continue
            paths = shortest_paths(g, s, t, dist)
            through = [0] * n
            for p in paths:
                for v in p[1:-1]:
                    through[v] += 1
            for v in range(n):
                total[v] += through[v] / len(paths)
    norm = n * (n - 1)
    return BetweennessVector(bc=tuple(x / norm for x in total) if norm else (0.0,) * n)


# -- generators -------------------------------------------------------------


def vertex_labels(n: int) -> list[str]:
    """Spreadsheet-style labels: a..z, aa, ab, ..."""
    out = []
    for i in range(n):
        label = ""
        i += 1
        while i:
            i, rem = divmod(i - 1, 26)
            label = chr(ord("a") + rem) + label
        out.append(label)
    return out


def _graph(n: int, edges: list[tuple[int, int]]) -> Graph:
    return Graph.from_edges(vertex_labels(n), edges)


def path_graph(n: int) -> Graph:
    return _graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GeneratorError("cycle needs n >= 3")
    return _graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(n: int) -> Graph:
    """Vertex 0 (label ``a``) is the centre; ``n - 1`` leaves."""
    if n < 2:
        raise GeneratorError("star needs n >= 2")
    return _graph(n, [(0, i) for i in range(1, n)])


def complete_graph(n: int) -> Graph:
    return _graph(n, list(combinations(range(n), 2)))


def barbell_graph(k: int, bridge_len: int) -> Graph:
    """Two K_k joined through a path of ``bridge_len`` extra vertices.

    Layout: clique 0..k-1, bridge k..k+bridge_len-1, clique after that.
    """
    if k < 2 or bridge_len < 0:
        raise GeneratorError("barbell needs k >= 2 and bridge_len >= 0")
    n = 2 * k + bridge_len
    edges = list(combinations(range(k), 2))
    chain = [k - 1, *range(k, k + bridge_len), k + bridge_len]
    edges += list(zip(chain, chain[1:]))
    second = range(k + bridge_len, n)
    edges += list(combinations(second, 2))
    return _graph(n, edges)


def two_blocks_cut(k1: int, k2: int) -> Graph:
    """Cut vertex 0 adjacent to every vertex of two disjoint cliques K_k1 and K_k2."""
    if k1 < 1 or k2 < 1:
        raise GeneratorError("two_blocks_cut needs k1, k2 >= 1")
    n = 1 + k1 + k2
    first = range(1, 1 + k1)
    second = range(1 + k1, n)
    edges = [(0, v) for v in range(1, n)]
    edges += list(combinations(first, 2)) + list(combinations(second, 2))
    return _graph(n, edges)


def gnp_graph(n: int, p: float, seed: int) -> Graph:
    """Connected G(n, p); attempt ``i`` draws from ``SeedSequence([seed, i])``."""
    if n < 1 or not 0.0 <= p <= 1.0:
        raise GeneratorError(f"invalid gnp parameters n={n}, p={p}")
    pairs = list(combinations(range(n), 2))
    for attempt in range(GNP_MAX_RETRIES):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, attempt])))
        keep = rng.random(len(pairs)) < p
        g = _graph(n, [e for e, k in zip(pairs, keep) if k])
        if len(component_sizes(g)) == 1:
            return g
    raise GeneratorError(f"gnp({n}, {p}, {seed}) not connected after {GNP_MAX_RETRIES} retries")


_FAMILIES = {
    "path": (path_graph, (int,)),
    "cycle": (cycle_graph, (int,)),
    "star": (star_graph, (int,)),
    "complete": (complete_graph, (int,)),
    "barbell": (barbell_graph, (int, int)),
    "two_blocks_cut": (two_blocks_cut, (int, int)),
    "gnp": (gnp_graph, (int, float, int)),
}


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    params: tuple

    @classmethod
    def parse(cls, text: str) -> GeneratorSpec:
        """Parse ``family:p1:p2...``, e.g. ``star:5`` or ``gnp:8:0.4:7``."""
        family, *raw = text.strip().split(":")
        if family not in _FAMILIES:
            raise GeneratorError(f"unknown generator family {family!r}; known: {sorted(_FAMILIES)}")
        types = _FAMILIES[family][1]
        if len(raw) != len(types):
            raise GeneratorError(f"{family} takes {len(types)} parameter(s), got {len(raw)}")
        try:
            params = tuple(t(x) for t, x in zip(types, raw))
        except ValueError as exc:
            raise GeneratorError(f"bad parameter in {text!r}: {exc}") from None
        return cls(family, params)

    def __str__(self) -> str:
        return ":".join([self.family, *map(str, self.params)])


def generate(spec: GeneratorSpec | str) -> Graph:
    if isinstance(spec, str):
        spec = GeneratorSpec.parse(spec)
    fn, types = _FAMILIES[spec.family]
    if len(spec.params) != len(types):
        raise GeneratorError(f"{spec.family} takes {len(types)} parameter(s)")
    if spec.params and spec.params[0] < 1:
        raise GeneratorError(f"{spec.family} needs a positive size")
    return fn(*spec.params)


# -- exact kernels ----------------------------------------------------------


@dataclass(frozen=True)
class KernelMatrix:
    states: list
    P: np.ndarray
    pi: np.ndarray

    def stationarity_residual(self) -> float:
        return float(np.max(np.abs(self.pi @ self.P - self.pi)))

    def detailed_balance_residual(self) -> float:
        flow = self.pi[:, None] * self.P
        return float(np.max(np.abs(flow - flow.T)))


def _kernel(weights: list[float]) -> tuple[np.ndarray, np.ndarray]:
    m = len(weights)
    P = np.zeros((m, m))
    for x in range(m):
        for y in range(m):
            if y != x:
                P[x, y] = clamped_ratio(weights[y], weights[x]) / m
        P[x, x] = 1.0 - P[x].sum()
    total = math.fsum(weights)
    pi = np.array([w / total for w in weights]) if total > 0 else np.zeros(m)
    return P, pi


def build_kernel_single(g: Graph, r: int) -> KernelMatrix:
    if g.n > KERNEL_SINGLE_MAX_N:
        raise TooLarge(f"single kernel is limited to n <= {KERNEL_SINGLE_MAX_N}, got {g.n}")
    deltas = dependency_matrix(g)
    P, pi = _kernel([deltas[v][r] for v in range(g.n)])
    return KernelMatrix(states=list(range(g.n)), P=P, pi=pi)


def build_kernel_joint(g: Graph, R: Sequence[int]) -> KernelMatrix:
    R = _check_set(g, R)
    if g.n * len(R) > KERNEL_JOINT_MAX_STATES:
        raise TooLarge(f"joint kernel is limited to n*|R| <= {KERNEL_JOINT_MAX_STATES}")
    deltas = dependency_matrix(g)
    states = [(r, v) for r in R for v in range(g.n)]
    P, pi = _kernel([deltas[v][r] for r, v in states])
    return KernelMatrix(states=states, P=P, pi=pi)


# -- coverage ---------------------------------------------------------------


@dataclass(frozen=True)
class CoverageResult:
    fraction: float
    runs: int
    T: int
    mu: float
    exact: float
    estimates: tuple[float, ...]

    @property
    def failure_fraction(self) -> float:
        return 1.0 - self.fraction


def _single_run(args: tuple[Graph, int, int, int]) -> float:
    g, r, T, seed = args
    return estimate_bc(run_chain(g, ChainConfig(r=r, T=T, seed=seed)), g)


def _joint_run(args: tuple[Graph, tuple[int, ...], int, int, int, int]) -> tuple[float, int]:
    g, R, r_i, r_j, T, seed = args
    trace = run_joint_chain(g, R, T, seed)
    return relative_bc_estimate(trace, r_i, r_j), len(trace.per_r_multisets[r_j])


def _map(fn, jobs: list, workers: int) -> list:
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [fn(job) for job in jobs]


def _check_runs(runs: int, epsilon: float) -> None:
    if runs < 1:
        raise InputError(f"runs must be >= 1, got {runs}")
    if not epsilon > 0:
        raise InputError(f"epsilon must be > 0, got {epsilon}")


def coverage_experiment(
    g: Graph,
    r: int,
    epsilon: float,
    delta: float,
    runs: int,
    seed: int,
    workers: int = 1,
) -> CoverageResult:
    """Fraction of independent chains whose BC estimate is within epsilon.

    Run ``i`` uses seed ``seed ^ i`` and ``T = required_samples(eps, delta, mu_exact)``.
    """
    _check_runs(runs, epsilon)
    mu = mu_exact(g, r).mu
    T = required_samples(epsilon, delta, mu)
    exact = exact_betweenness_single(g, r)
    estimates = _map(_single_run, [(g, r, T, seed ^ i) for i in range(runs)], workers)
    hits = sum(abs(e - exact) <= epsilon for e in estimates)
    return CoverageResult(hits / runs, runs, T, mu, exact, tuple(estimates))


def joint_coverage_experiment(
    g: Graph,
    R: Sequence[int],
    r_i: int,
    r_j: int,
    epsilon: float,
    delta: float,
    runs: int,
    seed: int,
    workers: int = 1,
) -> CoverageResult:
    """Coverage of the relative estimate of ``r_i`` w.r.t. ``r_j``.

    The stratum target comes from :func:`required_samples_joint`; the chain
    length is the exact-mass heuristic from :func:`joint_chain_length`.
    """
    _check_runs(runs, epsilon)
    R = _check_set(g, R)
    deltas = dependency_matrix(g)
    mu = mu_exact(g, r_j, deltas).mu
    stratum = required_samples_joint(epsilon, delta, mu)
    T = joint_chain_length(g, R, r_j, stratum, deltas)
    exact = relative_bc_exact(g, r_i, r_j, deltas)
    results = _map(_joint_run, [(g, R, r_i, r_j, T, seed ^ i) for i in range(runs)], workers)
    estimates = [e for e, _ in results]
    hits = sum(abs(e - exact) <= epsilon for e in estimates)
    return CoverageResult(hits / runs, runs, T, mu, exact, tuple(estimates))


def binomial_failure_threshold(delta: float, runs: int) -> float:
    """``delta + 3 sqrt(delta (1 - delta) / runs)``: 3-sigma slack on the failure rate."""
    return delta + 3.0 * math.sqrt(delta * (1.0 - delta) / runs)
