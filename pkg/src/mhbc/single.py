"""Single-space Metropolis-Hastings sampler for the betweenness of one vertex.

The chain lives on V(G) with a uniform independence proposal and targets
``P_r[v] = delta_{v.}(r) / sum_u delta_{u.}(r)``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .brandes import accumulate, dependency_matrix
from .errors import AllZeroDependency, InputError, VertexNotFound
from .graph import Graph, assert_connected, shortest_path_dag

RNG_ALGORITHM = "numpy.PCG64 via SeedSequence(seed).spawn(2) -> [proposals, acceptance]"


def clamped_ratio(num: float, den: float) -> float:
    """``min{1, num/den}`` with ``x/0 -> 1`` (including ``0/0``).

    Serves both as the acceptance probability (``num`` = proposed dependency,
    ``den`` = current one) and as the per-source term of relative betweenness.
    """
    if den == 0.0:
        return 1.0
    return min(1.0, num / den)


def make_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    if not (isinstance(seed, (int, np.integer)) and 0 <= seed < 2**64):
        raise InputError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    proposals, coins = np.random.SeedSequence(int(seed)).spawn(2)
    return np.random.Generator(np.random.PCG64(proposals)), np.random.Generator(np.random.PCG64(coins))


class DependencyCache:
    """Memoized dependency rows of sources on a fixed set of targets."""

    def __init__(self, g: Graph, targets: tuple[int, ...]) -> None:
        self.g = g
        self.targets = targets
        self.rows: dict[int, tuple[float, ...]] = {}
        self.evaluations = 0

    def row(self, v: int) -> tuple[float, ...]:
        hit = self.rows.get(v)
        if hit is None:
            delta = accumulate(shortest_path_dag(self.g, v))
            hit = tuple(delta[r] for r in self.targets)
            self.rows[v] = hit
            self.evaluations += 1
        return hit

    def has_traffic(self, k: int) -> bool:
        # If any source depends on r, some neighbour of r does too: a shortest
        # path ...u-r-w... restricted to start at u still routes through r.
        r = self.targets[k]
        return any(self.row(u)[k] > 0.0 for u in sorted(self.g.neighbors(r)))


@dataclass(frozen=True)
class ChainConfig:
    r: int
    T: int
    seed: int = 0
    epsilon: float | None = None
    delta: float | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.T, (int, np.integer)) or self.T < 1:
            raise InputError(f"T must be an integer >= 1, got {self.T!r}")
        if self.epsilon is not None and not self.epsilon > 0:
            raise InputError(f"epsilon must be > 0, got {self.epsilon}")
        if self.delta is not None and not 0 < self.delta < 1:
            raise InputError(f"delta must lie in (0, 1), got {self.delta}")


@dataclass
class ChainTrace:
    r: int
    n: int
    states: list[int]
    accepted: int
    delta_cache: dict[int, float]
    evaluations: int = 0

    @property
    def T(self) -> int:
        return len(self.states) - 1

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.T if self.T else 0.0


@dataclass(frozen=True)
class MuBound:
    mu: float
    argmax_vertex: int
    mean_delta: float


@dataclass
class EstimateReport:
    r: int
    estimate: float
    T: int
    seed: int
    traffic_free: bool = False
    epsilon: float | None = None
    delta: float | None = None
    mu: float | None = None
    accepted: int = 0
    dependency_evaluations: int = 0
    rng: str = RNG_ALGORITHM
    timing: dict[str, float] = field(default_factory=dict)


def _check_target(g: Graph, r: int) -> None:
    if not 0 <= r < g.n:
        raise VertexNotFound(f"target {r} not in graph")


def run_chain(g: Graph, cfg: ChainConfig) -> ChainTrace:
    assert_connected(g)
    _check_target(g, cfg.r)
    n = g.n
    if n < 3:
        raise AllZeroDependency(f"graph has {n} vertices; every dependency is 0")
    cache = DependencyCache(g, (cfg.r,))
    if not cache.has_traffic(0):
        raise AllZeroDependency(f"no shortest path passes through vertex {g.labels[cfg.r]!r}")

    prop_rng, coin_rng = make_streams(cfg.seed)
    proposals = prop_rng.integers(0, n, size=cfg.T + 1).tolist()
    coins = coin_rng.random(cfg.T).tolist()

    cur = proposals[0]
    d_cur = cache.row(cur)[0]
    states = [cur]
    accepted = 0
    for t in range(cfg.T):
        cand = proposals[t + 1]
        d_cand = cache.row(cand)[0]
        if coins[t] < clamped_ratio(d_cand, d_cur):
            cur, d_cur = cand, d_cand
            accepted += 1
        states.append(cur)
    return ChainTrace(
        r=cfg.r,
        n=n,
        states=states,
        accepted=accepted,
        delta_cache={v: row[0] for v, row in cache.rows.items()},
        evaluations=cache.evaluations,
    )


def estimate_bc(trace: ChainTrace, g: Graph) -> float:
    """Chain-average estimator ``sum_{v in states} delta_{v.}(r) / ((T+1)(n-1))``."""
    if trace.n != g.n or not 0 <= trace.r < g.n:
        raise InputError("trace was not produced on this graph")
    if g.n < 2:
        return 0.0
    total = math.fsum(trace.delta_cache[v] for v in trace.states)
    return min(1.0, max(0.0, total / (len(trace.states) * (g.n - 1))))


def mu_exact(g: Graph, r: int, deltas: list[tuple[float, ...]] | None = None) -> MuBound:
    """Tightest mu with ``delta_{v.}(r) <= mu * mean_v delta_{v.}(r)``; costs n accumulations."""
    _check_target(g, r)
    if deltas is None:
        deltas = dependency_matrix(g)
    column = [deltas[v][r] for v in range(g.n)]
    total = math.fsum(column)
    if total <= 0.0:
        raise AllZeroDependency(f"no shortest path passes through vertex {g.labels[r]!r}")
    argmax = max(range(g.n), key=lambda v: (column[v], -v))
    return MuBound(mu=g.n * column[argmax] / total, argmax_vertex=argmax, mean_delta=total / g.n)


def _check_plan(epsilon: float, delta: float, mu: float) -> None:
    if not epsilon > 0:
        raise InputError(f"epsilon must be > 0, got {epsilon}")
    if not 0 < delta < 1:
        raise InputError(f"delta must lie in (0, 1), got {delta}")
    if not mu >= 1:
        raise InputError(f"mu must be >= 1, got {mu}")


def required_samples(epsilon: float, delta: float, mu: float) -> int:
    """Smallest integer T with ``T >= mu^2 / (2 eps^2) * ln(2 / delta)``."""
    _check_plan(epsilon, delta, mu)
    return max(1, math.ceil(mu * mu / (2.0 * epsilon * epsilon) * math.log(2.0 / delta)))


def tail_bound(epsilon: float, T: int, mu: float) -> float:
    """Upper bound on ``P[|estimate - BC| > eps]`` after T transitions."""
    if not epsilon > 0:
        raise InputError(f"epsilon must be > 0, got {epsilon}")
    if not mu >= 1:
        raise InputError(f"mu must be >= 1, got {mu}")
    if T < 1:
        raise InputError(f"T must be >= 1, got {T}")
    gap = 2.0 * epsilon / mu - 3.0 / T
    if gap <= 0.0:
        return 1.0
    return min(1.0, 2.0 * math.exp(-T / 2.0 * gap * gap))


def estimate_betweenness(
    g: Graph,
    r: int,
    *,
    T: int | None = None,
    epsilon: float | None = None,
    delta: float | None = None,
    mu: float | None = None,
    seed: int = 0,
) -> EstimateReport:
    """Plan (if needed), run one chain and estimate BC(r).

    Either ``T`` or both ``epsilon`` and ``delta`` must be given. Without an
    explicit ``mu`` the planner pays for :func:`mu_exact`. A traffic-free
    target yields ``estimate == 0`` with ``traffic_free`` set.
    """
    timing: dict[str, float] = {}
    t0 = time.perf_counter()
    if T is None:
        if epsilon is None or delta is None:
            raise InputError("give either T or both epsilon and delta")
        if mu is None:
            try:
                mu = mu_exact(g, r).mu
            except AllZeroDependency:
                timing["plan"] = time.perf_counter() - t0
                return EstimateReport(r=r, estimate=0.0, T=0, seed=seed, traffic_free=True,
                                      epsilon=epsilon, delta=delta, timing=timing)
        T = required_samples(epsilon, delta, mu)
    timing["plan"] = time.perf_counter() - t0

    cfg = ChainConfig(r=r, T=T, seed=seed, epsilon=epsilon, delta=delta)
    t1 = time.perf_counter()
    try:
        trace = run_chain(g, cfg)
    except AllZeroDependency:
        timing["chain"] = time.perf_counter() - t1
        return EstimateReport(r=r, estimate=0.0, T=T, seed=seed, traffic_free=True,
                              epsilon=epsilon, delta=delta, mu=mu, timing=timing)
    timing["chain"] = time.perf_counter() - t1
    return EstimateReport(
        r=r,
        estimate=estimate_bc(trace, g),
        T=T,
        seed=seed,
        epsilon=epsilon,
        delta=delta,
        mu=mu,
        accepted=trace.accepted,
        dependency_evaluations=trace.evaluations,
        timing=timing,
    )
