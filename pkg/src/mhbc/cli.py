"""``mhbc`` command line: exact betweenness, both samplers, planning, verification.

Structured JSON goes to stdout, a short human summary to stderr.
Exit codes: 0 success, 1 assertion/estimation failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from itertools import permutations
from typing import Any, Sequence

from . import __version__
from .brandes import exact_betweenness, exact_betweenness_single
from .errors import (
    AllZeroDependency,
    EmptyStratum,
    InputError,
    MhbcError,
    ZeroBetweenness,
    ZeroDenominator,
)
from .graph import Graph, assert_connected, parse_edge_list
from .joint import bc_ratio_estimate, ratio_identity_check, relative_bc_estimate, relative_bc_exact, run_joint_chain
from .single import RNG_ALGORITHM, estimate_betweenness, mu_exact, required_samples, tail_bound
from .suites import SUITES, run_suite
from .testkit import generate

SCHEMA_VERSION = 1
SEED_ENV = "MHBC_SEED"
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


# -- deterministic JSON -----------------------------------------------------


def _encode(obj: Any) -> str:
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return format(obj, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        items = sorted(obj.items())
        return "{" + ", ".join(f"{json.dumps(str(k), ensure_ascii=False)}: {_encode(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_report(report: dict) -> str:
    """Stable key order, floats at 17 significant digits."""
    return _encode(report)


# -- shared plumbing --------------------------------------------------------


class UsageError(InputError):
    pass


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _load_graph(args: argparse.Namespace) -> tuple[Graph, str]:
    if args.gen:
        g, source = generate(args.gen), f"gen:{args.gen}"
    else:
        with open(args.graph, encoding="utf-8") as fh:
            g = parse_edge_list(fh, weighted=args.weighted)
        source = f"file:{args.graph}"
    assert_connected(g)
    return g, source


def _graph_summary(g: Graph, source: str) -> dict:
    return {"n": g.n, "m": g.m, "weighted": g.weighted, "source": source}


def _report(command: str, argv: Sequence[str], g: Graph | None, source: str | None,
            parameters: dict, results: dict, timing: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": {"name": command, "argv": list(argv)},
        "graph": _graph_summary(g, source) if g is not None else None,
        "parameters": parameters,
        "results": results,
        "timing": timing,
    }


def _vertex_set(g: Graph, text: str) -> list[int]:
    labels = [x.strip() for x in text.split(",") if x.strip()]
    if len(labels) < 2:
        raise UsageError(f"--set needs at least 2 vertices, got {len(labels)}")
    if len(set(labels)) != len(labels):
        raise UsageError("--set contains duplicate vertices")
    return [g.vertex(x) for x in labels]


# -- commands ---------------------------------------------------------------


def cmd_exact(args: argparse.Namespace, argv: Sequence[str]) -> tuple[dict, int]:
    t0 = time.perf_counter()
    g, source = _load_graph(args)
    timing = {"load": time.perf_counter() - t0}
    t1 = time.perf_counter()
    if args.vertex is not None:
        r = g.vertex(args.vertex)
        results = {"vertex": g.labels[r], "bc": exact_betweenness_single(g, r)}
    else:
        bc = exact_betweenness(g)
        results = {"labels": list(g.labels), "bc": list(bc.bc)}
    timing["exact"] = time.perf_counter() - t1
    params = {"vertex": args.vertex}
    return _report("exact", argv, g, source, params, results, timing), EXIT_OK


def cmd_estimate(args: argparse.Namespace, argv: Sequence[str]) -> tuple[dict, int]:
    t0 = time.perf_counter()
    g, source = _load_graph(args)
    r = g.vertex(args.vertex)
    timing = {"load": time.perf_counter() - t0}
    if args.T is None and (args.epsilon is None or args.delta is None):
        raise UsageError("give --T or both --epsilon and --delta")
    mu_source = None
    if args.T is None:
        mu_source = "override" if args.mu is not None else "exact"
    rep = estimate_betweenness(g, r, T=args.T, epsilon=args.epsilon, delta=args.delta,
                               mu=args.mu, seed=args.seed)
    timing.update(rep.timing)
    results: dict[str, Any] = {
        "estimate": rep.estimate,
        "traffic_free": rep.traffic_free,
        "T": rep.T,
        "accepted": rep.accepted,
        "acceptance_rate": rep.accepted / rep.T if rep.T else 0.0,
        "dependency_evaluations": rep.dependency_evaluations,
        "mu": rep.mu,
        "mu_source": mu_source,
    }
    if rep.mu is not None and args.epsilon is not None and rep.T:
        results["tail_bound"] = tail_bound(args.epsilon, rep.T, rep.mu)
    if args.exact_check:
        t1 = time.perf_counter()
        exact = exact_betweenness_single(g, r)
        timing["exact"] = time.perf_counter() - t1
        results["exact_bc"] = exact
        results["abs_error"] = abs(rep.estimate - exact)
    params = {"vertex": g.labels[r], "T": args.T, "epsilon": args.epsilon, "delta": args.delta,
              "mu": args.mu, "seed": args.seed, "rng": RNG_ALGORITHM}
    return _report("estimate", argv, g, source, params, results, timing), EXIT_OK


def cmd_relative(args: argparse.Namespace, argv: Sequence[str]) -> tuple[dict, int]:
    t0 = time.perf_counter()
    g, source = _load_graph(args)
    R = _vertex_set(g, args.set)
    timing = {"load": time.perf_counter() - t0}
    params = {"set": [g.labels[r] for r in R], "T": args.T, "seed": args.seed, "rng": RNG_ALGORITHM}
    t1 = time.perf_counter()
    try:
        trace = run_joint_chain(g, R, args.T, args.seed)
    except AllZeroDependency:
        timing["chain"] = time.perf_counter() - t1
        results = {"traffic_free": True, "pairs": []}
        return _report("relative", argv, g, source, params, results, timing), EXIT_OK
    timing["chain"] = time.perf_counter() - t1

    pairs = []
    for r_i, r_j in permutations(R, 2):
        entry: dict[str, Any] = {"r_i": g.labels[r_i], "r_j": g.labels[r_j]}
        try:
            entry["rel"] = relative_bc_estimate(trace, r_i, r_j)
            entry["rel_status"] = "ok"
        except EmptyStratum:
            entry["rel"], entry["rel_status"] = None, "empty_stratum"
        try:
            entry["ratio"] = bc_ratio_estimate(trace, r_i, r_j)
            entry["ratio_status"] = "ok"
        except EmptyStratum:
            entry["ratio"], entry["ratio_status"] = None, "empty_stratum"
        except ZeroDenominator:
            entry["ratio"], entry["ratio_status"] = None, "zero_denominator"
        if args.exact_check:
            entry["rel_exact"] = relative_bc_exact(g, r_i, r_j)
            try:
                lhs, rhs = ratio_identity_check(g, r_i, r_j)
                entry["identity"] = {"bc_ratio": lhs, "relative_ratio": rhs}
            except ZeroBetweenness:
                entry["identity"] = None
        pairs.append(entry)
    if args.exact_check:
        timing["exact"] = time.perf_counter() - t1 - timing["chain"]
    results = {
        "traffic_free": False,
        "accepted": trace.accepted,
        "acceptance_rate": trace.accepted / trace.T,
        "strata": {g.labels[r]: len(v) for r, v in trace.per_r_multisets.items()},
        "pairs": pairs,
    }
    return _report("relative", argv, g, source, params, results, timing), EXIT_OK


def cmd_plan(args: argparse.Namespace, argv: Sequence[str]) -> tuple[dict, int]:
    g = source = None
    mu, mu_source = args.mu, "override"
    if mu is None:
        if args.vertex is None or (args.graph is None and args.gen is None):
            raise UsageError("plan needs --mu, or a graph and --vertex to compute it exactly")
        g, source = _load_graph(args)
        mu, mu_source = mu_exact(g, g.vertex(args.vertex)).mu, "exact"
    T = required_samples(args.epsilon, args.delta, mu)
    results = {"T": T, "mu": mu, "mu_source": mu_source, "tail_bound": tail_bound(args.epsilon, T, mu)}
    params = {"epsilon": args.epsilon, "delta": args.delta, "mu": args.mu, "vertex": args.vertex}
    return _report("plan", argv, g, source, params, results, {}), EXIT_OK


def cmd_verify(args: argparse.Namespace, argv: Sequence[str]) -> tuple[dict, int]:
    t0 = time.perf_counter()
    checks = run_suite(args.suite, seed=args.seed, workers=args.workers)
    timing = {"verify": time.perf_counter() - t0}
    failed = [c for c in checks if not c.passed]
    results = {
        "passed": len(checks) - len(failed),
        "total": len(checks),
        "ok": not failed,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
        "failures": [c.name for c in failed],
    }
    params = {"suite": args.suite, "seed": args.seed}
    return _report("verify", argv, None, None, params, results, timing), EXIT_OK if not failed else EXIT_FAIL


# -- parser -----------------------------------------------------------------


def _add_graph_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--graph", metavar="PATH", help="edge-list file ('u v [w]' per line, '#' comments)")
    src.add_argument("--gen", metavar="SPEC", help="generator spec, e.g. star:5, gnp:8:0.4:7, two_blocks_cut:5:5")
    p.add_argument("--weighted", action="store_true", help="read a third weight column from --graph")


def build_parser(default_seed: int = 0) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mhbc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="exact betweenness (all vertices or one)")
    _add_graph_args(p)
    p.add_argument("--vertex")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("estimate", help="single-space MH estimate of BC(vertex)")
    _add_graph_args(p)
    p.add_argument("--vertex", required=True)
    p.add_argument("--T", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--mu", type=float, help="analytic mu; skips the exact O(n|E|) computation")
    p.add_argument("--seed", type=int, default=default_seed)
    p.add_argument("--exact-check", action="store_true")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("relative", help="joint-space MH relative betweenness of a vertex set")
    _add_graph_args(p)
    p.add_argument("--set", required=True, help="comma-separated vertex labels, at least 2")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--seed", type=int, default=default_seed)
    p.add_argument("--exact-check", action="store_true")
    p.set_defaults(func=cmd_relative)

    p = sub.add_parser("plan", help="chain length for an (epsilon, delta) guarantee")
    _add_graph_args(p, required=False)
    p.add_argument("--vertex")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--mu", type=float)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("verify", help="run a pinned property suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--seed", type=int, default=default_seed)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)
    return parser


def _summary(report: dict) -> str:
    res = report["results"]
    name = report["command"]["name"]
    if name == "verify":
        return f"verify {report['parameters']['suite']}: {res['passed']}/{res['total']} passed"
    if name == "estimate":
        if res["traffic_free"]:
            return "estimate: vertex carries no shortest-path traffic, BC = 0"
        line = f"estimate: BC ~ {res['estimate']:.6g} (T={res['T']}, acceptance {res['acceptance_rate']:.3f})"
        if "exact_bc" in res:
            line += f", exact {res['exact_bc']:.6g}, |error| {res['abs_error']:.3g}"
        return line
    if name == "relative":
        return f"relative: strata {res.get('strata', {})}"
    if name == "plan":
        return f"plan: T = {res['T']} (mu = {res['mu']:.6g}, {res['mu_source']})"
    return f"{name}: done"


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        parser = build_parser(_default_seed())
    except UsageError as exc:
        print(f"mhbc: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        report, code = args.func(args, argv)
    except (InputError, OSError) as exc:
        print(f"mhbc: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MhbcError as exc:
        print(f"mhbc: failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    sys.stdout.write(dumps_report(report) + "\n")
    print(_summary(report), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
