"""Joint-space Metropolis-Hastings sampler over R x V(G) and relative betweenness."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .brandes import dependency_matrix, exact_betweenness
from .errors import (
    AllZeroDependency,
    EmptyStratum,
    InputError,
    VertexNotFound,
    ZeroBetweenness,
    ZeroDenominator,
)
from .graph import Graph, assert_connected
from .single import DependencyCache, clamped_ratio, make_streams, required_samples


class JointState(NamedTuple):
    r: int
    v: int


@dataclass
class JointChainTrace:
    R: tuple[int, ...]
    n: int
    states: list[JointState]
    accepted: int
    delta_cache: dict[tuple[int, int], float]
    per_r_multisets: dict[int, list[int]]
    evaluations: int = 0

    @property
    def T(self) -> int:
        return len(self.states) - 1

    def stratum_sizes(self) -> dict[int, int]:
        return {r: len(vs) for r, vs in self.per_r_multisets.items()}


@dataclass(frozen=True)
class RelativeScoreReport:
    r_i: int
    r_j: int
    rel_ij: float
    rel_ji: float
    ratio: float
    m_i: int
    m_j: int


def _check_set(g: Graph, R: Sequence[int]) -> tuple[int, ...]:
    R = tuple(int(r) for r in R)
    if len(R) < 2:
        raise InputError(f"the vertex set needs at least 2 members, got {len(R)}")
    if len(set(R)) != len(R):
        raise InputError("the vertex set contains duplicates")
    for r in R:
        if not 0 <= r < g.n:
            raise VertexNotFound(f"vertex {r} not in graph")
    return R


def run_joint_chain(g: Graph, R: Sequence[int], T: int, seed: int = 0) -> JointChainTrace:
    assert_connected(g)
    R = _check_set(g, R)
    if not isinstance(T, int) or T < 1:
        raise InputError(f"T must be an integer >= 1, got {T!r}")
    n, k = g.n, len(R)
    cache = DependencyCache(g, R)
    if not any(cache.has_traffic(i) for i in range(k)):
        raise AllZeroDependency("no vertex of the set carries shortest-path traffic")

    prop_rng, coin_rng = make_streams(seed)
    r_draws = prop_rng.integers(0, k, size=T + 1).tolist()
    v_draws = prop_rng.integers(0, n, size=T + 1).tolist()
    coins = coin_rng.random(T).tolist()

    cur_i, cur_v = r_draws[0], v_draws[0]
    d_cur = cache.row(cur_v)[cur_i]
    states = [JointState(R[cur_i], cur_v)]
    strata: dict[int, list[int]] = {r: [] for r in R}
    strata[R[cur_i]].append(cur_v)
    accepted = 0
    for t in range(T):
        ci, cv = r_draws[t + 1], v_draws[t + 1]
        d_cand = cache.row(cv)[ci]
        if coins[t] < clamped_ratio(d_cand, d_cur):
            cur_i, cur_v, d_cur = ci, cv, d_cand
            accepted += 1
        states.append(JointState(R[cur_i], cur_v))
        strata[R[cur_i]].append(cur_v)

    delta_cache = {(r, v): row[i] for v, row in cache.rows.items() for i, r in enumerate(R)}
    return JointChainTrace(
        R=R,
        n=n,
        states=states,
        accepted=accepted,
        delta_cache=delta_cache,
        per_r_multisets=strata,
        evaluations=cache.evaluations,
    )


def _stratum(trace: JointChainTrace, r: int) -> list[int]:
    if r not in trace.per_r_multisets:
        raise InputError(f"vertex {r} is not in the sampled set")
    return trace.per_r_multisets[r]


def relative_bc_estimate(trace: JointChainTrace, r_i: int, r_j: int) -> float:
    """Mean of ``min{1, delta_v(r_i)/delta_v(r_j)}`` over the stratum of ``r_j``."""
    _stratum(trace, r_i)
    stratum = _stratum(trace, r_j)
    if not stratum:
        raise EmptyStratum(f"no samples with r-component {r_j}; estimate undefined")
    if r_i == r_j:
        return 1.0
    cache = trace.delta_cache
    total = math.fsum(clamped_ratio(cache[(r_i, v)], cache[(r_j, v)]) for v in stratum)
    return total / len(stratum)


def bc_ratio_estimate(trace: JointChainTrace, r_i: int, r_j: int) -> float:
    """Estimate of ``BC(r_i) / BC(r_j)``."""
    if r_i == r_j:
        _stratum(trace, r_i)
        return 1.0
    den = relative_bc_estimate(trace, r_j, r_i)
    if den == 0.0:
        raise ZeroDenominator(f"relative estimate of {r_j} w.r.t. {r_i} is 0; ratio unbounded")
    return relative_bc_estimate(trace, r_i, r_j) / den


def relative_report(trace: JointChainTrace, r_i: int, r_j: int) -> RelativeScoreReport:
    rel_ij = relative_bc_estimate(trace, r_i, r_j)
    rel_ji = relative_bc_estimate(trace, r_j, r_i)
    if rel_ji == 0.0:
        raise ZeroDenominator(f"relative estimate of {r_j} w.r.t. {r_i} is 0; ratio unbounded")
    return RelativeScoreReport(
        r_i=r_i,
        r_j=r_j,
        rel_ij=rel_ij,
        rel_ji=rel_ji,
        ratio=rel_ij / rel_ji,
        m_i=len(trace.per_r_multisets[r_i]),
        m_j=len(trace.per_r_multisets[r_j]),
    )


def relative_bc_exact(
    g: Graph, r_i: int, r_j: int, deltas: list[tuple[float, ...]] | None = None
) -> float:
    """``(1/n) sum_v min{1, delta_v(r_i)/delta_v(r_j)}`` by direct summation."""
    for r in (r_i, r_j):
        if not 0 <= r < g.n:
            raise VertexNotFound(f"vertex {r} not in graph")
    if deltas is None:
        deltas = dependency_matrix(g)
    return math.fsum(clamped_ratio(row[r_i], row[r_j]) for row in deltas) / g.n


def relative_expectation_exact(
    g: Graph, r_i: int, r_j: int, deltas: list[tuple[float, ...]] | None = None
) -> float:
    """``E_{P_{r_j}}[min{1, delta_v(r_i)/delta_v(r_j)}]``, the limit of :func:`relative_bc_estimate`.

    Differs from :func:`relative_bc_exact` (a uniform average over sources)
    unless the dependencies on ``r_j`` are constant on their support.
    """
    for r in (r_i, r_j):
        if not 0 <= r < g.n:
            raise VertexNotFound(f"vertex {r} not in graph")
    if deltas is None:
        deltas = dependency_matrix(g)
    mass = math.fsum(row[r_j] for row in deltas)
    if mass <= 0.0:
        raise AllZeroDependency(f"vertex {r_j} carries no traffic; P_r is undefined")
    return math.fsum(row[r_j] * clamped_ratio(row[r_i], row[r_j]) for row in deltas) / mass


def ratio_identity_check(
    g: Graph, r_i: int, r_j: int, deltas: list[tuple[float, ...]] | None = None
) -> tuple[float, float]:
    """Return ``(BC(r_i)/BC(r_j), E_{P_j}[min{1, d_i/d_j}] / E_{P_i}[min{1, d_j/d_i}])``.

    Detailed balance of the joint chain makes the two coincide exactly. When
    the dependency supports of ``r_i`` and ``r_j`` are disjoint both
    expectations vanish and the ratio form is undefined (ZeroDenominator).
    """
    bc = exact_betweenness(g)
    for r in (r_i, r_j):
        if bc[r] <= 0.0:
            raise ZeroBetweenness(f"vertex {r} has zero betweenness")
    if deltas is None:
        deltas = dependency_matrix(g)
    lhs = bc[r_i] / bc[r_j]
    den = relative_expectation_exact(g, r_j, r_i, deltas)
    if den == 0.0:
        raise ZeroDenominator(f"vertices {r_i} and {r_j} share no dependency support")
    return lhs, relative_expectation_exact(g, r_i, r_j, deltas) / den


def required_samples_joint(epsilon: float, delta: float, mu_j: float) -> int:
    """Stratum size ``|M(j)|`` needed for an (eps, delta) relative estimate."""
    return required_samples(epsilon, delta, mu_j)


def joint_chain_length(
    g: Graph,
    R: Sequence[int],
    r_j: int,
    stratum_size: int,
    deltas: list[tuple[float, ...]] | None = None,
) -> int:
    """Chain length whose expected stratum ``M(j)`` reaches ``stratum_size``.

    Uses the exact dependency masses, so it is meant for testing and
    calibration only; the achieved stratum size is random.
    """
    R = _check_set(g, R)
    if deltas is None:
        deltas = dependency_matrix(g)
    mass = {r: math.fsum(row[r] for row in deltas) for r in R}
    if mass[r_j] <= 0.0:
        raise AllZeroDependency(f"vertex {r_j} carries no traffic; its stratum stays empty")
    total = math.fsum(mass.values())
    return max(1, math.ceil(stratum_size * total / mass[r_j]))
