"""Property suites behind ``mhbc verify``, pinned to desk-scale instances."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

from .brandes import dependency_matrix, exact_betweenness
from .graph import Graph
from .errors import ZeroDenominator
from .joint import ratio_identity_check, relative_expectation_exact
from .single import mu_exact
from .testkit import (
    binomial_failure_threshold,
    brute_force_betweenness,
    build_kernel_joint,
    build_kernel_single,
    coverage_experiment,
    generate,
    gnp_graph,
    joint_coverage_experiment,
)

ORACLE_TOL = 1e-9
CLOSED_FORM_TOL = 1e-12
KERNEL_TOL = 1e-12
IDENTITY_TOL = 1e-9
MU_CONSTANT = 2.2
COVERAGE_RUNS = 200
COVERAGE_EPS = 0.05
COVERAGE_DELTA = 0.1


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)


def family_graphs(max_n: int = 12) -> list[tuple[str, Graph]]:
    specs = []
    for n in range(2, max_n + 1):
        specs += [f"path:{n}", f"star:{n}", f"complete:{n}"]
        if n >= 3:
            specs.append(f"cycle:{n}")
    for k in range(2, 6):
        for b in range(0, 3):
            if 2 * k + b <= max_n:
                specs.append(f"barbell:{k}:{b}")
    for k1 in range(1, 6):
        for k2 in range(k1, 6):
            if 1 + k1 + k2 <= max_n:
                specs.append(f"two_blocks_cut:{k1}:{k2}")
    return [(s, generate(s)) for s in specs]


def random_graphs(count: int, seed: int, min_n: int = 3, max_n: int = 10, p: float = 0.4) -> list[tuple[str, Graph]]:
    span = max_n - min_n + 1
    out = []
    for i in range(count):
        n = min_n + i % span
        out.append((f"gnp:{n}:{p}:{seed + i}", gnp_graph(n, p, seed + i)))
    return out


def oracle_suite(seed: int = 0) -> list[Check]:
    checks = []
    for name, g in family_graphs(12) + random_graphs(100, seed):
        fast, slow = exact_betweenness(g), brute_force_betweenness(g)
        err = max(abs(a - b) for a, b in zip(fast, slow))
        checks.append(Check(f"oracle {name}", err <= ORACLE_TOL, {"max_abs_error": err}))
    for n in range(4, 13):
        bc = exact_betweenness(generate(f"star:{n}"))[0]
        err = abs(bc - (n - 2) / n)
        checks.append(Check(f"closed form star:{n} centre", err <= CLOSED_FORM_TOL, {"bc": bc}))
    p3 = exact_betweenness(generate("path:3"))
    checks.append(Check("closed form path:3 middle", abs(p3[1] - 1 / 3) <= CLOSED_FORM_TOL, {"bc": p3[1]}))
    c4 = exact_betweenness(generate("cycle:4"))
    err = max(abs(x - 1 / 12) for x in c4)
    checks.append(Check("closed form cycle:4", err <= CLOSED_FORM_TOL, {"max_abs_error": err}))
    return checks


def kernel_graphs(seed: int = 0) -> list[tuple[str, Graph]]:
    return [(s, g) for s, g in family_graphs(8)] + random_graphs(20, seed, 3, 8)


def kernel_suite(seed: int = 0) -> list[Check]:
    checks = []
    for name, g in kernel_graphs(seed):
        deltas = dependency_matrix(g)
        mass = [math.fsum(row[r] for row in deltas) for r in range(g.n)]
        worst_pi = worst_db = 0.0
        cases = 0
        for r in range(g.n):
            if mass[r] > 0:
                k = build_kernel_single(g, r)
                worst_pi = max(worst_pi, k.stationarity_residual())
                worst_db = max(worst_db, k.detailed_balance_residual())
                cases += 1
        for R in combinations(range(g.n), 2):
            if mass[R[0]] + mass[R[1]] > 0:
                k = build_kernel_joint(g, R)
                worst_pi = max(worst_pi, k.stationarity_residual())
                worst_db = max(worst_db, k.detailed_balance_residual())
                cases += 1
        if cases:
            ok = worst_pi < KERNEL_TOL and worst_db < KERNEL_TOL
            checks.append(Check(f"kernel {name}", ok, {
                "kernels": cases, "stationarity_residual": worst_pi, "balance_residual": worst_db}))
    return checks


def theorem2_suite(seed: int = 0) -> list[Check]:
    checks = []
    for name, g in random_graphs(100, seed, 4, 10):
        bc = exact_betweenness(g)
        deltas = dependency_matrix(g)
        positive = [v for v in range(g.n) if bc[v] > 0]
        worst, pairs, disjoint = 0.0, 0, 0
        for r_i, r_j in combinations(positive, 2):
            pairs += 1
            try:
                lhs, rhs = ratio_identity_check(g, r_i, r_j, deltas)
                worst = max(worst, abs(lhs - rhs))
            except ZeroDenominator:
                # ratio form is 0/0; the cross-multiplied form must read 0 = 0
                disjoint += 1
                worst = max(worst, bc[r_i] * relative_expectation_exact(g, r_j, r_i, deltas),
                            bc[r_j] * relative_expectation_exact(g, r_i, r_j, deltas))
        checks.append(Check(f"identity {name}", worst <= IDENTITY_TOL,
                            {"pairs": pairs, "disjoint_support_pairs": disjoint, "max_abs_error": worst}))
    return checks


def theorem3_suite(seed: int = 0) -> list[Check]:
    checks = []
    for k in range(3, 21):
        mu = mu_exact(generate(f"two_blocks_cut:{k}:{k}"), 0).mu
        checks.append(Check(f"mu two_blocks_cut:{k}:{k} cut vertex", mu <= MU_CONSTANT, {"mu": mu}))
    for n in range(4, 51):
        mu = mu_exact(generate(f"star:{n}"), 0).mu
        err = abs(mu - n / (n - 1))
        checks.append(Check(f"mu star:{n} centre", err <= CLOSED_FORM_TOL, {"mu": mu}))
    return checks


def coverage_suite(seed: int = 0, workers: int = 1) -> list[Check]:
    threshold = binomial_failure_threshold(COVERAGE_DELTA, COVERAGE_RUNS)
    checks = []
    for spec in ("star:8", "two_blocks_cut:5:5"):
        res = coverage_experiment(generate(spec), 0, COVERAGE_EPS, COVERAGE_DELTA, COVERAGE_RUNS, seed, workers)
        ok = res.fraction >= 1 - COVERAGE_DELTA and res.failure_fraction <= threshold
        checks.append(Check(f"single coverage {spec} vertex 0", ok, _coverage_detail(res, threshold)))
    res = joint_coverage_experiment(
        generate("path:8"), (3, 4), 3, 4, COVERAGE_EPS, COVERAGE_DELTA, COVERAGE_RUNS, seed, workers)
    checks.append(Check("joint coverage path:8 R={d,e}", res.failure_fraction <= threshold,
                        _coverage_detail(res, threshold)))
    return checks


def _coverage_detail(res, threshold: float) -> dict:
    mean = math.fsum(res.estimates) / len(res.estimates)
    return {"fraction_within": res.fraction, "failure_threshold": threshold, "T": res.T,
            "mu": res.mu, "exact": res.exact, "mean_estimate": mean}


SUITES: dict[str, Callable[..., list[Check]]] = {
    "oracle": oracle_suite,
    "kernel": kernel_suite,
    "coverage": coverage_suite,
    "theorem2": theorem2_suite,
    "theorem3": theorem3_suite,
}


def run_suite(name: str, seed: int = 0, workers: int = 1) -> list[Check]:
    if name == "coverage":
        return coverage_suite(seed, workers)
    return SUITES[name](seed)
