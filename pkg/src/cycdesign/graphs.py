"""Directed and undirected graphs over dense integer vertices.

Everything here treats graphs as immutable values.  Vertex ``v`` is the
integer ``v`` in ``range(n)``; optional display names ride along but never
take part in equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence


Edge = tuple[int, int]


def _check_vertex(n: int, v: int) -> None:
    if not (0 <= v < n):
        raise ValueError(f"vertex {v} out of range for n={n}")


@dataclass(frozen=True)
class DirectedGraph:
    n: int
    edges: frozenset = frozenset()
    names: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        edges = frozenset((int(u), int(v)) for u, v in self.edges)
        for u, v in edges:
            _check_vertex(self.n, u)
            _check_vertex(self.n, v)
            if u == v:
                raise ValueError(f"self-loop at {u}")
        object.__setattr__(self, "edges", edges)
        if self.names is not None:
            names = tuple(str(s) for s in self.names)
            if len(names) != self.n or len(set(names)) != self.n:
                raise ValueError("names must be unique and one per vertex")
            object.__setattr__(self, "names", names)

    def __repr__(self):
        return f"DirectedGraph(n={self.n}, edges={sorted(self.edges)})"

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge], names=None) -> "DirectedGraph":
        return cls(n, frozenset(edges), names)

    @classmethod
    def from_named(cls, names: Sequence[str], edges: Iterable[tuple[str, str]]) -> "DirectedGraph":
        idx = {s: i for i, s in enumerate(names)}
        return cls(len(names), frozenset((idx[a], idx[b]) for a, b in edges), tuple(names))

    @cached_property
    def _children(self) -> tuple:
        ch = [set() for _ in range(self.n)]
        for u, v in self.edges:
            ch[u].add(v)
        return tuple(frozenset(c) for c in ch)

    @cached_property
    def _parents(self) -> tuple:
        pa = [set() for _ in range(self.n)]
        for u, v in self.edges:
            pa[v].add(u)
        return tuple(frozenset(p) for p in pa)

    def children(self, v: int) -> frozenset:
        return self._children[v]

    def parents(self, v: int) -> frozenset:
        return self._parents[v]

    def neighbors(self, v: int) -> frozenset:
        return self._children[v] | self._parents[v]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def adjacent(self, u: int, v: int) -> bool:
        return (u, v) in self.edges or (v, u) in self.edges

    def name(self, v: int) -> str:
        return self.names[v] if self.names is not None else str(v)

    def index(self, label) -> int:
        """Resolve a vertex given as an index or a display name."""
        if isinstance(label, int):
            _check_vertex(self.n, label)
            return label
        label = str(label).strip()
        if self.names is not None and label in self.names:
            return self.names.index(label)
        if label.lstrip("-").isdigit():
            v = int(label)
            _check_vertex(self.n, v)
            return v
        raise ValueError(f"unknown vertex {label!r}")

    def descendants(self, x: int) -> frozenset:
        return _reach(self._children, [x])

    def ancestors(self, x: int) -> frozenset:
        return _reach(self._parents, [x])

    def ancestors_of(self, xs: Iterable[int]) -> frozenset:
        return _reach(self._parents, xs)

    @cached_property
    def all_descendants(self) -> tuple:
        return tuple(self.descendants(v) for v in range(self.n))

    @cached_property
    def all_ancestors(self) -> tuple:
        return tuple(self.ancestors(v) for v in range(self.n))

    def is_acyclic(self) -> bool:
        return scc_partition(self).smax <= 1

    def skeleton(self) -> "UndirectedGraph":
        return UndirectedGraph(self.n, frozenset(self.edges), self.names)

    def mutilate(self, intervention: Iterable[int]) -> "DirectedGraph":
        return mutilate(self, intervention)

    def with_names(self, names) -> "DirectedGraph":
        return DirectedGraph(self.n, self.edges, names)


@dataclass(frozen=True)
class UndirectedGraph:
    n: int
    edges: frozenset = frozenset()
    names: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        edges = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            _check_vertex(self.n, u)
            _check_vertex(self.n, v)
            if u == v:
                raise ValueError(f"self-loop at {u}")
            edges.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(edges))
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))

    def __repr__(self):
        return f"UndirectedGraph(n={self.n}, edges={sorted(self.edges)})"

    @cached_property
    def _adj(self) -> tuple:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    def neighbors(self, v: int) -> frozenset:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def issubgraph(self, other: "UndirectedGraph") -> bool:
        return self.n == other.n and self.edges <= other.edges

    @classmethod
    def complete(cls, n: int) -> "UndirectedGraph":
        return cls(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n)))


@dataclass(frozen=True)
class SccPartition:
    """SCCs ordered by their smallest member; members are kept sorted."""

    components: tuple
    component_of: tuple

    @property
    def smax(self) -> int:
        return max((len(c) for c in self.components), default=0)

    @property
    def n(self) -> int:
        return len(self.component_of)

    def __len__(self):
        return len(self.components)

    def scc(self, v: int) -> tuple:
        return self.components[self.component_of[v]]

    def same(self, u: int, v: int) -> bool:
        return self.component_of[u] == self.component_of[v]

    @classmethod
    def from_components(cls, n: int, components: Iterable[Iterable[int]]) -> "SccPartition":
        comps = sorted((tuple(sorted(c)) for c in components), key=lambda c: c[0])
        comp_of = [-1] * n
        for i, c in enumerate(comps):
            for v in c:
                if comp_of[v] != -1:
                    raise ValueError(f"vertex {v} in two components")
                comp_of[v] = i
        if -1 in comp_of:
            raise ValueError("components do not cover all vertices")
        return cls(tuple(comps), tuple(comp_of))


@dataclass(frozen=True)
class Coloring:
    color: tuple
    chi: int

    def __post_init__(self):
        used = set(self.color)
        if self.color and used != set(range(1, self.chi + 1)):
            raise ValueError("colors must be exactly 1..chi")

    def classes(self) -> list:
        out = [[] for _ in range(self.chi)]
        for v, c in enumerate(self.color):
            out[c - 1].append(v)
        return out


def _reach(adj: Sequence[Iterable[int]], sources: Iterable[int]) -> frozenset:
    seen = set(sources)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


def descendants(g: DirectedGraph, x: int) -> frozenset:
    return g.descendants(x)


def ancestors(g: DirectedGraph, x: int) -> frozenset:
    return g.ancestors(x)


def scc_partition(g: DirectedGraph) -> SccPartition:
    """Iterative Tarjan; O(n + |E|) with no recursion."""
    n = g.n
    children = [sorted(g.children(v)) for v in range(n)]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list = []
    comps: list = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(children[v]):
                work[-1] = (v, i + 1)
                w = children[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return SccPartition.from_components(n, comps)


def mutilate(g: DirectedGraph, intervention: Iterable[int]) -> DirectedGraph:
    """Remove every edge pointing into an intervened vertex."""
    targets = frozenset(intervention)
    for v in targets:
        _check_vertex(g.n, v)
    if not targets:
        return g
    return DirectedGraph(g.n, frozenset(e for e in g.edges if e[1] not in targets), g.names)


def virtual_edges(g: DirectedGraph) -> frozenset:
    """Non-adjacent pairs sharing a child that is an ancestor of either of them."""
    anc = g.all_ancestors
    out = set()
    for x in range(g.n):
        for z in range(x + 1, g.n):
            if g.adjacent(x, z):
                continue
            for c in g.children(x) & g.children(z):
                if c in anc[x] or c in anc[z]:
                    out.add((x, z))
                    break
    return frozenset(out)


def observable_skeleton_d(g: DirectedGraph) -> UndirectedGraph:
    return UndirectedGraph(g.n, g.edges | virtual_edges(g), g.names)


def sigma_acyclify(g: DirectedGraph) -> DirectedGraph:
    """A sigma-acyclification: SCC-lifted cross edges plus index-ordered SCC cliques."""
    sccs = scc_partition(g)
    edges = set()
    for x, z in g.edges:
        if sccs.same(x, z):
            continue
        for y in sccs.scc(z):
            edges.add((x, y))
    for comp in sccs.components:
        for i, u in enumerate(comp):
            for v in comp[i + 1:]:
                edges.add((u, v))
    return DirectedGraph(g.n, frozenset(edges), g.names)


def observable_skeleton_sigma(g: DirectedGraph) -> UndirectedGraph:
    """Pairs that no conditioning set sigma-separates.

    ``{x, y}`` is an edge when the two share an SCC, or when one of them has
    an edge into the other's SCC.  An edge leaving x's SCC from some other
    member does not make x adjacent to its target: conditioning on that
    member blocks the path.
    """
    sccs = scc_partition(g)
    edges = set()
    for comp in sccs.components:
        for i, u in enumerate(comp):
            for v in comp[i + 1:]:
                edges.add((u, v))
    for x, z in g.edges:
        if sccs.same(x, z):
            continue
        for y in sccs.scc(z):
            edges.add((x, y))
    return UndirectedGraph(g.n, frozenset(edges), g.names)


def greedy_coloring(g: UndirectedGraph) -> Coloring:
    """Largest-degree-first greedy coloring with colors numbered from 1."""
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    color = [0] * g.n
    for v in order:
        taken = {color[w] for w in g.neighbors(v)}
        c = 1
        while c in taken:
            c += 1
        color[v] = c
    return Coloring(tuple(color), max(color, default=0))


def is_proper_coloring(g: UndirectedGraph, coloring: Coloring) -> bool:
    return len(coloring.color) == g.n and all(
        coloring.color[u] != coloring.color[v] for u, v in g.edges
    )
