"""Metropolis-Hastings estimators of betweenness and relative betweenness."""

from __future__ import annotations

__version__ = "0.1.0"

from .brandes import (
    BetweennessVector,
    DependencyVector,
    dependency_matrix,
    dependency_on_target,
    dependency_vector,
    exact_betweenness,
    exact_betweenness_single,
)
from .errors import (
    AllZeroDependency,
    DisconnectedGraph,
    EmptyStratum,
    InputError,
    MhbcError,
    ParseError,
    SigmaOverflow,
    ZeroBetweenness,
    ZeroDenominator,
)
from .graph import Graph, ShortestPathDag, assert_connected, parse_edge_list, shortest_path_dag
from .joint import (
    JointChainTrace,
    JointState,
    RelativeScoreReport,
    bc_ratio_estimate,
    joint_chain_length,
    ratio_identity_check,
    relative_bc_estimate,
    relative_bc_exact,
    relative_expectation_exact,
    relative_report,
    required_samples_joint,
    run_joint_chain,
)
from .single import (
    ChainConfig,
    ChainTrace,
    EstimateReport,
    MuBound,
    estimate_bc,
    estimate_betweenness,
    mu_exact,
    required_samples,
    run_chain,
    tail_bound,
)
from .testkit import GeneratorSpec, generate
