"""Experiment design for learning cyclic and acyclic causal graphs."""

from .graphs import (
    Coloring,
    DirectedGraph,
    SccPartition,
    UndirectedGraph,
    descendants,
    ancestors,
    greedy_coloring,
    mutilate,
    observable_skeleton_d,
    observable_skeleton_sigma,
    scc_partition,
    sigma_acyclify,
    virtual_edges,
)
from .separation import (
    SeparationFlavor,
    d_separated,
    i_r_markov_equivalent,
    independence_model,
    r_separable,
    sigma_separated,
)
from .sepsys import (
    BoundedConfig,
    ExperimentFamily,
    bounded_lifted_separating_system,
    colored_separating_system,
    lifted_separating_system,
    nm_separating_system,
)
from .oracle import CiConfig, DataOracle, GraphOracle, LinearScm, sample, scm_from_graph
from .learner import SkeletonHint, learn_bounded, learn_unbounded

__version__ = "0.1.0"
