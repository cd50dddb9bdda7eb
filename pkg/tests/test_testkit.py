from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import connected_graphs
from mhbc.brandes import dependency_matrix, exact_betweenness
from mhbc.errors import GeneratorError, InputError, TooLarge
from mhbc.single import ChainConfig, run_chain
from mhbc.testkit import (
    GeneratorSpec,
    binomial_failure_threshold,
    brute_force_betweenness,
    build_kernel_joint,
    build_kernel_single,
    coverage_experiment,
    generate,
    shortest_paths,
    vertex_labels,
)


def test_labels():
    assert vertex_labels(3) == ["a", "b", "c"]
    assert vertex_labels(28)[25:] == ["z", "aa", "ab"]


def test_brute_force_closed_forms():
    assert brute_force_betweenness(generate("path:3")).bc == pytest.approx((0, 1 / 3, 0))
    assert brute_force_betweenness(generate("complete:4")).bc == (0.0,) * 4
    assert brute_force_betweenness(generate("cycle:4")).bc == pytest.approx((1 / 12,) * 4)


def test_brute_force_guard():
    with pytest.raises(TooLarge):
        brute_force_betweenness(generate("path:13"))


def test_shortest_paths_enumeration():
    g = generate("cycle:6")
    assert sorted(shortest_paths(g, 0, 3)) == [[0, 1, 2, 3], [0, 5, 4, 3]]
    assert shortest_paths(g, 2, 2) == [[2]]


# -- generators -------------------------------------------------------------


def test_star():
    g = generate("star:5")
    assert (g.n, g.m, g.degree(0)) == (5, 4, 4)


def test_two_blocks_cut():
    g = generate("two_blocks_cut:5:5")
    assert g.n == 11
    assert g.degree(0) == 10
    assert g.m == 10 + 2 * 10
    # removing the cut vertex leaves two K5
    rest = {v: set(g.neighbors(v)) - {0} for v in range(1, 11)}
    assert all(rest[v] == set(range(1, 6)) - {v} for v in range(1, 6))
    assert all(rest[v] == set(range(6, 11)) - {v} for v in range(6, 11))


def test_barbell():
    g = generate("barbell:5:2")
    assert g.n == 12 and g.m == 2 * 10 + 3
    bc = exact_betweenness(g)
    assert bc[5] > 0 and bc[6] > 0
    assert bc[5] == pytest.approx(bc[6])


def test_gnp_deterministic_and_connected():
    a, b = generate("gnp:8:0.4:7"), generate("gnp:8:0.4:7")
    assert a.edges == b.edges
    assert generate("gnp:8:0.4:8").edges != a.edges
    exact_betweenness(a)  # raises if disconnected


def test_gnp_retry_exhaustion():
    with pytest.raises(GeneratorError):
        generate("gnp:5:0.0:1")


@pytest.mark.parametrize("text", ["nope:3", "star", "star:x", "gnp:8:0.4", "cycle:2", "path:0"])
def test_bad_specs(text):
    with pytest.raises(GeneratorError):
        generate(text)


def test_spec_roundtrip():
    spec = GeneratorSpec.parse("gnp:8:0.4:7")
    assert spec.params == (8, 0.4, 7)
    assert str(spec) == "gnp:8:0.4:7"


@pytest.mark.parametrize(
    "spec", ["path:7", "cycle:9", "star:12", "complete:6", "barbell:4:1", "two_blocks_cut:3:5"]
)
def test_families_match_oracle(spec):
    g = generate(spec)
    assert max(abs(a - b) for a, b in zip(exact_betweenness(g), brute_force_betweenness(g))) <= 1e-9


# -- kernels ----------------------------------------------------------------


def test_kernel_single_star4():
    k = build_kernel_single(generate("star:4"), 0)
    assert k.pi.tolist() == pytest.approx([0, 1 / 3, 1 / 3, 1 / 3])
    np.testing.assert_allclose(k.P.sum(axis=1), 1.0, atol=1e-12)
    # centre escapes to any leaf w.p. 1/n each
    assert k.P[0, 1] == pytest.approx(0.25)
    # leaves never move to the centre
    assert k.P[1, 0] == 0.0


def test_kernel_single_p3():
    k = build_kernel_single(generate("path:3"), 1)
    assert k.pi.tolist() == pytest.approx([0.5, 0.0, 0.5])
    assert k.stationarity_residual() < 1e-12


def test_kernel_joint_p4():
    k = build_kernel_joint(generate("path:4"), [1, 2])
    mass_b = sum(p for (r, _), p in zip(k.states, k.pi) if r == 1)
    assert mass_b == pytest.approx(0.5)
    np.testing.assert_allclose(k.P.sum(axis=1), 1.0, atol=1e-12)
    D = dependency_matrix(generate("path:4"))
    for (r, v), p in zip(k.states, k.pi):
        if D[v][r] == 0.0:
            assert p == 0.0


def test_kernel_guards():
    with pytest.raises(TooLarge):
        build_kernel_single(generate("path:9"), 1)
    with pytest.raises(TooLarge):
        build_kernel_joint(generate("path:9"), [1, 2, 3, 4])


def test_kernel_matches_empirical_transitions():
    g = generate("path:5")
    k = build_kernel_single(g, 2)
    trace = run_chain(g, ChainConfig(r=2, T=200_000, seed=13))
    counts = np.zeros((5, 5))
    for a, b in zip(trace.states, trace.states[1:]):
        counts[a, b] += 1
    rows = counts.sum(axis=1)
    for x in range(5):
        if rows[x] > 1000:
            np.testing.assert_allclose(counts[x] / rows[x], k.P[x], atol=0.01)


@settings(max_examples=40, deadline=None)
@given(connected_graphs(min_n=3, max_n=8))
def test_single_kernel_stationary(g):
    D = dependency_matrix(g)
    for r in range(g.n):
        if sum(row[r] for row in D) > 0:
            k = build_kernel_single(g, r)
            assert k.stationarity_residual() < 1e-12
            assert k.detailed_balance_residual() < 1e-12
            np.testing.assert_allclose(k.P.sum(axis=1), 1.0, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(connected_graphs(min_n=3, max_n=6))
def test_joint_kernel_stationary(g):
    D = dependency_matrix(g)
    for R in combinations(range(g.n), 2):
        if sum(row[R[0]] + row[R[1]] for row in D) > 0:
            k = build_kernel_joint(g, R)
            assert k.stationarity_residual() < 1e-12
            assert k.detailed_balance_residual() < 1e-12


# -- coverage ---------------------------------------------------------------


def test_coverage_trivial_epsilon():
    res = coverage_experiment(generate("star:6"), 0, 1.0, 0.1, 10, seed=3)
    assert res.fraction == 1.0 and res.runs == 10


def test_coverage_rejects_zero_runs():
    with pytest.raises(InputError):
        coverage_experiment(generate("star:6"), 0, 0.1, 0.1, 0, seed=3)


def test_coverage_workers_agree():
    g = generate("two_blocks_cut:3:3")
    a = coverage_experiment(g, 0, 0.1, 0.2, 8, seed=5)
    b = coverage_experiment(g, 0, 0.1, 0.2, 8, seed=5, workers=2)
    assert a == b


def test_binomial_threshold():
    assert binomial_failure_threshold(0.1, 200) == pytest.approx(0.1636, abs=1e-4)
