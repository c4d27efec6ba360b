"""Separating-system constructions and their verifiers.

Four flavors are covered: colored, (n, M), lifted, and size-bounded lifted.
Families are ordered tuples of frozensets; constructors deduplicate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .graphs import Coloring, SccPartition


class InvalidInputError(ValueError):
    pass


class InfeasibleBoundError(ValueError):
    """Experiment size cap below smax - 1: no design can identify every graph."""


class BrokenInvariantError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExperimentFamily:
    sets: tuple
    provenance: str = ""

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __getitem__(self, i):
        return self.sets[i]

    @property
    def max_size(self) -> int:
        return max((len(s) for s in self.sets), default=0)

    def deduplicated(self) -> "ExperimentFamily":
        seen = set()
        out = []
        for s in self.sets:
            if s not in seen:
                seen.add(s)
                out.append(s)
        return ExperimentFamily(tuple(out), self.provenance)

    def to_json(self, names=None) -> dict:
        if names is None:
            return {"sets": [sorted(s) for s in self.sets]}
        return {"sets": [[names[v] for v in sorted(s)] for s in self.sets]}

    @classmethod
    def from_json(cls, obj: dict, provenance: str = "file") -> "ExperimentFamily":
        return cls(tuple(frozenset(s) for s in obj["sets"]), provenance)


@dataclass(frozen=True)
class BoundedConfig:
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise InvalidInputError("experiment size cap must be at least 1")


def ceil_log(base: int, n: int) -> int:
    """Smallest d with base**d >= n, in exact integer arithmetic."""
    d, p = 0, 1
    while p < n:
        p *= base
        d += 1
    return d


def unbounded_count_bound(chi: int, smax: int) -> int:
    return 2 * ceil_log(2, chi) + smax


def bounded_lifted_count_bound(n: int, m: int, smax: int) -> int:
    return smax * (1 + _bin_excess(n, m, smax))


def nm_count_bound(n: int, m: int) -> int:
    a = -(-n // m)
    return a * ceil_log(a, n)


def bounded_count_bound(n: int, m: int, smax: int) -> int:
    return nm_count_bound(n, m) + bounded_lifted_count_bound(n, m, smax)


def _bin_excess(n: int, m: int, smax: int) -> int:
    # t in the bin-packing argument; floored at 0 for the single-SCC case smax == n
    return max(0, (n - smax - 1) // (m - smax + 2))


def colored_separating_system(coloring: Coloring, graph=None) -> ExperimentFamily:
    """Bit-position split of the color classes: 2 * ceil(log2 chi) sets at most.

    If ``graph`` (an undirected graph) is given, the coloring is checked for
    propriety first.
    """
    if graph is not None:
        from .graphs import is_proper_coloring

        if not is_proper_coloring(graph, coloring):
            raise InvalidInputError("coloring is not proper")
    if any(c < 1 or c > coloring.chi for c in coloring.color):
        raise InvalidInputError("colors must lie in 1..chi")
    bits = ceil_log(2, coloring.chi)
    sets = []
    for i in range(bits):
        ones = frozenset(v for v, c in enumerate(coloring.color) if (c >> i) & 1)
        zeros = frozenset(v for v, c in enumerate(coloring.color) if not (c >> i) & 1)
        sets.extend([ones, zeros])
    return ExperimentFamily(tuple(sets), "colored").deduplicated()


def is_colored_separating(family: Iterable, coloring: Coloring) -> bool:
    sets = [frozenset(s) for s in family]
    n = len(coloring.color)
    for x in range(n):
        for y in range(n):
            if x == y or coloring.color[x] == coloring.color[y]:
                continue
            if not any(x in s and y not in s for s in sets):
                return False
    return True


def nm_separating_system(n: int, m: int) -> ExperimentFamily:
    """Every ordered pair separated using sets of size at most ``m``.

    Vertex ``i`` gets a label of ``d`` letters over an alphabet of size
    ``a = ceil(n/m)``: letter 0 is ``i mod a`` and letter ``p`` is
    ``(digit_p(i) + digit_0(i)) mod a``.  Within each run of ``a``
    consecutive indices every position takes every letter once, so no letter
    repeats more than ``ceil(n/a) <= m`` times.  The labels are injective
    because ``digit_0`` is recoverable from position 0.
    """
    if not (1 <= m < n):
        raise InvalidInputError(f"need 1 <= m < n, got n={n}, m={m}")
    a = -(-n // m)
    d = ceil_log(a, n)
    sets = []
    for p in range(d):
        groups = [[] for _ in range(a)]
        for i in range(n):
            d0 = i % a
            letter = d0 if p == 0 else ((i // a**p) % a + d0) % a
            groups[letter].append(i)
        sets.extend(frozenset(g) for g in groups if g)
    return ExperimentFamily(tuple(sets), "nm").deduplicated()


def is_nm_separating(family: Iterable, n: int, m: int) -> bool:
    sets = [frozenset(s) for s in family]
    if any(len(s) > m for s in sets):
        return False
    return all(
        any(x in s and y not in s for s in sets)
        for x in range(n)
        for y in range(n)
        if x != y
    )


def lifted_separating_system(sccs: SccPartition) -> ExperimentFamily:
    """The i-th set drops the i-th member (ascending) of every SCC with at least i members."""
    lmax = sccs.smax
    sets = []
    for i in range(lmax):
        members = set()
        for comp in sccs.components:
            if i < len(comp):
                members.update(v for v in comp if v != comp[i])
        sets.append(frozenset(members))
    return ExperimentFamily(tuple(sets), "lifted").deduplicated()


def _has_witness(sets, comp, x) -> bool:
    rest = frozenset(comp) - {x}
    return any(x not in s and rest <= s for s in sets)


def is_lifted_separating(family: Iterable, sccs: SccPartition) -> bool:
    sets = [frozenset(s) for s in family]
    return all(_has_witness(sets, comp, x) for comp in sccs.components for x in comp)


def bounded_lifted_separating_system(sccs: SccPartition, cfg: BoundedConfig, n=None) -> ExperimentFamily:
    """Lifted system with every set of size <= cfg.m, built by first-fit bin packing.

    For each member index ``i`` the blocks ``S_j minus its i-th member`` are
    packed first-fit into ``t + 1`` bins of capacity ``m``.  Blocks never
    contain another SCC's dropped member, so any bin holding a block is a
    witness for it.
    """
    n = sccs.n if n is None else n
    lmax = sccs.smax
    m = cfg.m
    if m < lmax - 1:
        raise InfeasibleBoundError(
            f"max experiment size {m} < smax - 1 = {lmax - 1}; some graphs with this "
            "SCC structure cannot be identified"
        )
    nbins = _bin_excess(n, m, lmax) + 1
    sets = []
    for i in range(lmax):
        bins: list = []
        for comp in sccs.components:
            if i >= len(comp):
                continue
            block = [v for v in comp if v != comp[i]]
            for b in bins:
                if len(b) + len(block) <= m:
                    b.extend(block)
                    break
            else:
                if len(bins) >= nbins:
                    raise BrokenInvariantError("first-fit ran out of bins")
                bins.append(list(block))
        sets.extend(frozenset(b) for b in bins)
    return ExperimentFamily(tuple(sets), "bounded-lifted").deduplicated()


def witness_lookup(family, sccs: SccPartition, scc_index: int, x: int) -> int:
    """Index of a set containing every other member of the SCC but not ``x``."""
    comp = frozenset(sccs.components[scc_index])
    if x not in comp:
        raise InvalidInputError(f"vertex {x} not in SCC {scc_index}")
    rest = comp - {x}
    for k, s in enumerate(family):
        if x not in s and rest <= s:
            return k
    raise BrokenInvariantError(f"no witness for vertex {x}: family is not lifted-separating")

