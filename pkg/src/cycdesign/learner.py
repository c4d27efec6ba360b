"""Two-stage learning of a directed (possibly cyclic) graph from experiments.

Stage 1 intervenes on a colored (or (n, M)) separating system to recover the
descendant sets and SCCs.  Stage 2 intervenes on a lifted separating system
and reads off each vertex's parents, first inside its SCC with marginal tests
and then among its other ancestors with one conditional test each.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Optional

from .graphs import (
    DirectedGraph,
    SccPartition,
    UndirectedGraph,
    greedy_coloring,
    observable_skeleton_d,
    observable_skeleton_sigma,
    scc_partition,
)
from .separation import SeparationFlavor
from .sepsys import (
    BoundedConfig,
    ExperimentFamily,
    InfeasibleBoundError,
    bounded_count_bound,
    bounded_lifted_separating_system,
    colored_separating_system,
    lifted_separating_system,
    nm_separating_system,
    unbounded_count_bound,
    witness_lookup,
)


class SkeletonMode(str, enum.Enum):
    ORACLE_EXACT = "oracle"
    PC_SKELETON = "pc"
    COMPLETE = "complete"


@dataclass(frozen=True)
class SkeletonHint:
    mode: SkeletonMode = SkeletonMode.ORACLE_EXACT
    max_depth: int = 2

    @classmethod
    def parse(cls, value, max_depth: int = 2) -> "SkeletonHint":
        if isinstance(value, cls):
            return value
        return cls(SkeletonMode(str(value).lower()), max_depth)


@dataclass
class Stage1Result:
    descendant_sets: tuple
    sccs: SccPartition
    h_graph: DirectedGraph
    experiments_used: ExperimentFamily
    d_sets: tuple = ()

    def ancestor_sets(self) -> tuple:
        return self.h_graph.all_ancestors


@dataclass
class LearnedGraph:
    graph: DirectedGraph
    experiments_total: int
    max_experiment_size: int
    experiments_raw: int = 0
    count_bound: Optional[int] = None
    chi: Optional[int] = None
    smax: int = 0
    stage1: Optional[Stage1Result] = None
    stage2_family: Optional[ExperimentFamily] = None
    queried: tuple = field(default=(), repr=False)


class _QueryLog:
    """Wraps an oracle and records which intervention sets were used."""

    def __init__(self, oracle):
        self.oracle = oracle
        self.n = oracle.n
        self.sets: list = []
        self._seen: set = set()

    def independent(self, x, y, cond=(), intervention=frozenset()):
        intervention = frozenset(intervention)
        if intervention not in self._seen:
            self._seen.add(intervention)
            self.sets.append(intervention)
        return self.oracle.independent(x, y, cond, intervention)


def learn_observable_skeleton(oracle, hint=SkeletonHint(), flavor="d") -> UndirectedGraph:
    """A supergraph of the true skeleton, from observational information only."""
    hint = SkeletonHint.parse(hint)
    flavor = SeparationFlavor.parse(flavor)
    n = oracle.n
    if hint.mode is SkeletonMode.COMPLETE:
        return UndirectedGraph.complete(n)
    if hint.mode is SkeletonMode.ORACLE_EXACT:
        g = getattr(oracle, "graph", None)
        if g is None:
            raise ValueError("exact skeleton hint needs an oracle exposing the hidden graph")
        return observable_skeleton_d(g) if flavor is SeparationFlavor.D else observable_skeleton_sigma(g)
    return pc_skeleton(oracle, hint.max_depth)


def pc_skeleton(oracle, max_depth: int = 2) -> UndirectedGraph:
    """PC-style edge removal on observational CI tests up to ``max_depth``.

    An edge is dropped only on a found independence, so under faithfulness
    the result keeps every true adjacency.
    """
    n = oracle.n
    adj = [set(range(n)) - {v} for v in range(n)]
    for depth in range(max_depth + 1):
        for x in range(n):
            for y in sorted(adj[x]):
                if y < x or y not in adj[x]:
                    continue
                removed = False
                for base in (adj[x] - {y}, adj[y] - {x}):
                    if len(base) < depth:
                        continue
                    for s in itertools.combinations(sorted(base), depth):
                        if oracle.independent(x, y, s, frozenset()):
                            adj[x].discard(y)
                            adj[y].discard(x)
                            removed = True
                            break
                    if removed:
                        break
    edges = frozenset((u, v) for u in range(n) for v in adj[u] if u < v)
    return UndirectedGraph(n, edges)


def learn_descendants(oracle, skeleton: Optional[UndirectedGraph], family: ExperimentFamily) -> Stage1Result:
    """Descendant sets and SCCs from experiments on a separating family.

    ``D_X`` collects, over every experiment containing X, the skeleton
    neighbors of X that stay marginally dependent on it; with ``skeleton``
    None every vertex counts as a neighbor.  The graph H with edges X -> D_X
    has the same descendant sets as the hidden graph.
    """
    n = oracle.n
    d_sets = [set() for _ in range(n)]
    for targets in family:
        for x in sorted(targets):
            cands = range(n) if skeleton is None else sorted(skeleton.neighbors(x))
            for y in cands:
                if y == x or y in targets or y in d_sets[x]:
                    continue
                if not oracle.independent(x, y, (), targets):
                    d_sets[x].add(y)
    h = DirectedGraph(n, frozenset((x, y) for x in range(n) for y in d_sets[x]))
    return Stage1Result(
        descendant_sets=h.all_descendants,
        sccs=scc_partition(h),
        h_graph=h,
        experiments_used=family,
        d_sets=tuple(frozenset(d) for d in d_sets),
    )


def learn_parents(oracle, stage1: Stage1Result, family: ExperimentFamily) -> DirectedGraph:
    """Parents of every vertex, given a lifted separating family over ``stage1.sccs``."""
    n = oracle.n
    anc = stage1.ancestor_sets()
    sccs = stage1.sccs
    edges = set()
    for k, comp in enumerate(sccs.components):
        members = frozenset(comp)
        for x in comp:
            targets = family[witness_lookup(family, sccs, k, x)]
            for y in comp:
                if y != x and not oracle.independent(x, y, (), targets):
                    edges.add((y, x))
            outside = sorted(anc[x] - members)
            for y in outside:
                cond = sorted(anc[x] - members - {y})
                if not oracle.independent(x, y, cond, targets):
                    edges.add((y, x))
    return DirectedGraph(n, frozenset(edges))


def _finish(log: _QueryLog, graph, stage1, family2, raw, bound, chi) -> LearnedGraph:
    return LearnedGraph(
        graph=graph,
        experiments_total=len(log.sets),
        max_experiment_size=max((len(s) for s in log.sets), default=0),
        experiments_raw=raw,
        count_bound=bound,
        chi=chi,
        smax=stage1.sccs.smax,
        stage1=stage1,
        stage2_family=family2,
        queried=tuple(log.sets),
    )


def learn_unbounded(oracle, flavor="d", skeleton_hint=SkeletonHint()) -> LearnedGraph:
    """Full pipeline: skeleton, coloring, colored family, stage 1, lifted family, stage 2."""
    skeleton = learn_observable_skeleton(oracle, skeleton_hint, flavor)
    coloring = greedy_coloring(skeleton)
    family1 = colored_separating_system(coloring)
    log = _QueryLog(oracle)
    stage1 = learn_descendants(log, skeleton, family1)
    family2 = lifted_separating_system(stage1.sccs)
    graph = learn_parents(log, stage1, family2)
    bound = unbounded_count_bound(coloring.chi, stage1.sccs.smax)
    return _finish(log, graph, stage1, family2, len(family1) + len(family2), bound, coloring.chi)


def learn_bounded(oracle, flavor="d", cfg: BoundedConfig = None) -> LearnedGraph:
    """Same two stages with every experiment capped at ``cfg.m`` vertices.

    Stage 1 uses an (n, M) separating system and needs no skeleton.  Raises
    :class:`InfeasibleBoundError` if the SCCs found by stage 1 are too large
    for the cap.
    """
    if cfg is None:
        raise ValueError("bounded learning needs a BoundedConfig")
    n = oracle.n
    family1 = nm_separating_system(n, cfg.m) if n > 1 else ExperimentFamily((), "nm")
    log = _QueryLog(oracle)
    stage1 = learn_descendants(log, None, family1)
    smax = stage1.sccs.smax
    if cfg.m < smax - 1:
        raise InfeasibleBoundError(
            f"discovered smax={smax} needs experiments of size {smax - 1}, cap is {cfg.m}"
        )
    family2 = bounded_lifted_separating_system(stage1.sccs, cfg, n)
    graph = learn_parents(log, stage1, family2)
    bound = bounded_count_bound(n, cfg.m, smax) if n > 1 else len(family2)
    return _finish(log, graph, stage1, family2, len(family1) + len(family2), bound, None)
