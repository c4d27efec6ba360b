"""d- and sigma-separation on directed graphs that may contain cycles."""

from __future__ import annotations

import enum
import itertools
from functools import lru_cache
from typing import Iterable

from .graphs import DirectedGraph, scc_partition, sigma_acyclify, mutilate


class SeparationFlavor(str, enum.Enum):
    D = "d"
    SIGMA = "sigma"

    @classmethod
    def parse(cls, value) -> "SeparationFlavor":
        if isinstance(value, cls):
            return value
        v = str(value).lower()
        if v in ("s", "σ"):
            v = "sigma"
        return cls(v)


class InvalidQueryError(ValueError):
    pass


class CapacityError(RuntimeError):
    """Raised instead of silently truncating an exponential enumeration."""


IM_MAX_N = 12
SEPARABLE_MAX_N = 25


def _check_query(g: DirectedGraph, x: int, y: int, s) -> frozenset:
    if x == y:
        raise InvalidQueryError("x and y must differ")
    s_list = list(s)
    cond = frozenset(s_list)
    if len(cond) != len(s_list):
        raise InvalidQueryError("duplicate vertices in conditioning set")
    for v in (x, y, *cond):
        if not (0 <= v < g.n):
            raise InvalidQueryError(f"vertex {v} out of range")
    if x in cond or y in cond:
        raise InvalidQueryError("conditioning set overlaps {x, y}")
    return cond


def _d_connected(children, parents, x: int, y: int, cond: frozenset, anc_cond: frozenset) -> bool:
    # Reachability over (vertex, arrived-from-child) states.
    seen = set()
    stack = [(x, True)]
    while stack:
        state = stack.pop()
        if state in seen:
            continue
        seen.add(state)
        v, up = state
        if v == y:
            return True
        if up:
            if v in cond:
                continue
            for p in parents[v]:
                stack.append((p, True))
            for c in children[v]:
                stack.append((c, False))
        else:
            if v not in cond:
                for c in children[v]:
                    stack.append((c, False))
            if v in anc_cond:
                for p in parents[v]:
                    stack.append((p, True))
    return False


def d_separated(g: DirectedGraph, x: int, y: int, s: Iterable[int] = ()) -> bool:
    cond = _check_query(g, x, y, s)
    anc = g.ancestors_of(cond) if cond else frozenset()
    return not _d_connected(g._children, g._parents, x, y, cond, anc)


@lru_cache(maxsize=8192)
def _acyclification(g: DirectedGraph) -> DirectedGraph:
    return sigma_acyclify(g)


def sigma_separated(g: DirectedGraph, x: int, y: int, s: Iterable[int] = ()) -> bool:
    cond = _check_query(g, x, y, s)
    return d_separated(_acyclification(g), x, y, cond)


def separated(g: DirectedGraph, x: int, y: int, s: Iterable[int], flavor) -> bool:
    if SeparationFlavor.parse(flavor) is SeparationFlavor.D:
        return d_separated(g, x, y, s)
    return sigma_separated(g, x, y, s)


def effective_graph(g: DirectedGraph, flavor) -> DirectedGraph:
    """Graph whose d-separations equal the flavor's separations in ``g``."""
    if SeparationFlavor.parse(flavor) is SeparationFlavor.D:
        return g
    return _acyclification(g)


def path_separated(g: DirectedGraph, x: int, y: int, s: Iterable[int], flavor) -> bool:
    """Decide separation by enumerating simple paths and applying the blocking rules.

    Exponential; used as an independent check of the reachability deciders.
    Partial paths are pruned as soon as an interior vertex is known to block.
    """
    flavor = SeparationFlavor.parse(flavor)
    cond = _check_query(g, x, y, s)
    anc_cond = g.ancestors_of(cond) if cond else frozenset()
    sccs = scc_partition(g)
    sigma = flavor is SeparationFlavor.SIGMA

    # steps: (neighbor, forward) where forward means the edge points away from v
    steps = []
    for v in range(g.n):
        out = [(w, True) for w in sorted(g.children(v))]
        out += [(w, False) for w in sorted(g.parents(v))]
        steps.append(out)

    def blocks(prev, prev_fwd, cur, nxt, nxt_fwd) -> bool:
        # prev_fwd: edge prev->cur; nxt_fwd: edge cur->nxt
        collider = prev_fwd and not nxt_fwd
        if collider:
            return cur not in anc_cond
        if cur not in cond:
            return False
        if not sigma:
            return True
        same = sccs.component_of
        if nxt_fwd and same[nxt] != same[cur]:
            return True
        if not prev_fwd and same[prev] != same[cur]:
            return True
        return False

    on_path = [False] * g.n
    on_path[x] = True

    def extend(prev, prev_fwd, cur) -> bool:
        for nxt, fwd in steps[cur]:
            if on_path[nxt]:
                continue
            if blocks(prev, prev_fwd, cur, nxt, fwd):
                continue
            if nxt == y:
                return True
            on_path[nxt] = True
            found = extend(cur, fwd, nxt)
            on_path[nxt] = False
            if found:
                return True
        return False

    for nxt, fwd in steps[x]:
        if nxt == y:
            return False
        if on_path[nxt]:
            continue
        on_path[nxt] = True
        found = extend(x, fwd, nxt)
        on_path[nxt] = False
        if found:
            return False
    return True


def r_separable(g: DirectedGraph, x: int, y: int, flavor) -> bool:
    """Whether some conditioning set separates ``x`` and ``y`` (subset scan)."""
    if g.n > SEPARABLE_MAX_N:
        raise CapacityError(f"separability scan limited to n <= {SEPARABLE_MAX_N}")
    if x == y:
        raise InvalidQueryError("x and y must differ")
    h = effective_graph(g, flavor)
    rest = [v for v in range(g.n) if v not in (x, y)]
    anc = h.all_ancestors
    for k in range(len(rest) + 1):
        for s in itertools.combinations(rest, k):
            cond = frozenset(s)
            anc_cond = frozenset().union(*(anc[v] for v in s)) if s else frozenset()
            if not _d_connected(h._children, h._parents, x, y, cond, anc_cond):
                return True
    return False


def independence_model(g: DirectedGraph, flavor) -> frozenset:
    """All separated triples ``(x, y, S)`` with ``x < y``; ``S`` is a frozenset."""
    if g.n > IM_MAX_N:
        raise CapacityError(f"independence model enumeration limited to n <= {IM_MAX_N}")
    return _independence_model(g, SeparationFlavor.parse(flavor))


@lru_cache(maxsize=16384)
def _independence_model(g: DirectedGraph, flavor: SeparationFlavor) -> frozenset:
    h = effective_graph(g, flavor)
    anc = h.all_ancestors
    ch, pa = h._children, h._parents
    out = []
    for x in range(g.n):
        for y in range(x + 1, g.n):
            rest = [v for v in range(g.n) if v != x and v != y]
            for k in range(len(rest) + 1):
                for s in itertools.combinations(rest, k):
                    cond = frozenset(s)
                    anc_cond = frozenset().union(*(anc[v] for v in s)) if s else frozenset()
                    if not _d_connected(ch, pa, x, y, cond, anc_cond):
                        out.append((x, y, cond))
    return frozenset(out)


def i_r_markov_equivalent(g1: DirectedGraph, g2: DirectedGraph, experiments, flavor) -> bool:
    """Equal independence models after every mutilation in ``experiments``."""
    if g1.n != g2.n:
        raise ValueError("graphs must share a vertex set")
    if g1.n > IM_MAX_N:
        raise CapacityError(f"independence model enumeration limited to n <= {IM_MAX_N}")
    flavor = SeparationFlavor.parse(flavor)
    for targets in experiments:
        targets = frozenset(targets)
        if independence_model(mutilate(g1, targets), flavor) != independence_model(
            mutilate(g2, targets), flavor
        ):
            return False
    return True
