"""Distributed matching algorithms on a simulated synchronous network."""

from ._core import (
    Graph,
    algorithm_names,
    algorithm_needs_eps,
    generate,
    is_b_matching,
    is_matching,
    is_maximal,
    dominates,
    max_matching,
    max_weighted_matching,
    min_edge_dominating_set,
    run,
    run_experiment,
    uncovered_edge_fraction,
)

__all__ = [
    "Graph",
    "algorithm_names",
    "algorithm_needs_eps",
    "generate",
    "is_b_matching",
    "is_matching",
    "is_maximal",
    "dominates",
    "max_matching",
    "max_weighted_matching",
    "min_edge_dominating_set",
    "run",
    "run_experiment",
    "uncovered_edge_fraction",
]
