import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cycdesign import zoo
from cycdesign.graphs import Coloring, SccPartition, scc_partition
from cycdesign.sepsys import (
    BoundedConfig,
    BrokenInvariantError,
    ExperimentFamily,
    InfeasibleBoundError,
    InvalidInputError,
    bounded_lifted_count_bound,
    bounded_lifted_separating_system,
    ceil_log,
    colored_separating_system,
    is_colored_separating,
    is_lifted_separating,
    is_nm_separating,
    lifted_separating_system,
    nm_count_bound,
    nm_separating_system,
    witness_lookup,
)


def running_example_coloring():
    g = zoo.three_cycles()
    pinned = {"X2": 1, "X4": 1, "Z2": 1, "Z4": 1, "X1": 2, "X3": 2, "Z1": 2, "Z3": 2,
              "Y1": 3, "Y3": 3, "Y2": 4, "Y4": 4}
    return g, Coloring(tuple(pinned[g.name(v)] for v in range(g.n)), 4)


def names(g, family):
    return {frozenset(g.name(v) for v in s) for s in family}


@st.composite
def partitions(draw, max_n=40):
    n = draw(st.integers(1, max_n))
    perm = draw(st.permutations(range(n)))
    cuts = sorted(draw(st.sets(st.integers(1, n - 1), max_size=n - 1))) if n > 1 else []
    blocks, prev = [], 0
    for c in cuts + [n]:
        blocks.append(perm[prev:c])
        prev = c
    return SccPartition.from_components(n, blocks)


# ------------------------------------------------------------------- helpers


@pytest.mark.parametrize("base,n,expected", [(2, 1, 0), (2, 2, 1), (2, 8, 3), (2, 9, 4), (3, 27, 3), (4, 12, 2)])
def test_ceil_log_is_exact(base, n, expected):
    assert ceil_log(base, n) == expected


def test_family_json_roundtrip():
    fam = ExperimentFamily((frozenset({2, 0}), frozenset()), "x")
    assert fam.to_json() == {"sets": [[0, 2], []]}
    assert ExperimentFamily.from_json(fam.to_json()).sets == fam.sets


# ------------------------------------------------------------------- colored


def test_colored_running_example():
    g, coloring = running_example_coloring()
    fam = colored_separating_system(coloring)
    expected = {
        frozenset({"X2", "X4", "Z2", "Z4", "Y1", "Y3"}),  # colors 1, 3: bit 0 set
        frozenset({"X1", "X3", "Z1", "Z3", "Y2", "Y4"}),
        frozenset({"X1", "X3", "Z1", "Z3", "Y1", "Y3"}),  # colors 2, 3: bit 1 set
        frozenset({"X2", "X4", "Z2", "Z4", "Y2", "Y4"}),
    }
    assert names(g, fam) == expected
    assert is_colored_separating(fam, coloring)


def test_colored_trivial_cases():
    assert len(colored_separating_system(Coloring((1, 1, 1), 1))) == 0
    two = colored_separating_system(Coloring((1, 2, 1), 2))
    assert set(two) == {frozenset({0, 2}), frozenset({1})}


def test_colored_rejects_improper_coloring():
    g = zoo.three_cycles().skeleton()
    with pytest.raises(InvalidInputError):
        colored_separating_system(Coloring((1,) * 12, 1), g)


def test_colored_verifier_negative_cases():
    c = Coloring((1, 2), 2)
    assert not is_colored_separating([], c)
    assert not is_colored_separating([{1}], c)


@settings(max_examples=500)
@given(st.lists(st.integers(1, 12), min_size=1, max_size=30))
def test_colored_system_separates_and_is_small(raw):
    used = sorted(set(raw))
    relabel = {c: i + 1 for i, c in enumerate(used)}
    coloring = Coloring(tuple(relabel[c] for c in raw), len(used))
    fam = colored_separating_system(coloring)
    assert is_colored_separating(fam, coloring)
    assert len(fam) <= 2 * math.ceil(math.log2(coloring.chi)) if coloring.chi > 1 else len(fam) == 0


# ------------------------------------------------------------------------ nm


def test_nm_small_cases():
    assert set(nm_separating_system(2, 1)) == {frozenset({0}), frozenset({1})}
    four = nm_separating_system(4, 2)
    assert len(four) == 4 and four.max_size == 2 and is_nm_separating(four, 4, 2)
    eight = nm_separating_system(8, 4)
    assert len(eight) == 6 and all(len(s) == 4 for s in eight)


def test_nm_plain_base_labels_would_break_the_cap():
    # base-3 digit 1 of 0..4 is 0,0,0,1,1: three zeros exceed m = 2
    fam = nm_separating_system(5, 2)
    assert fam.max_size <= 2 and is_nm_separating(fam, 5, 2)


@pytest.mark.parametrize("n,m", [(3, 3), (3, 0), (1, 1)])
def test_nm_rejects_bad_parameters(n, m):
    with pytest.raises(InvalidInputError):
        nm_separating_system(n, m)


def test_nm_exhaustive_up_to_64():
    for n in range(2, 65):
        for m in range(1, n):
            fam = nm_separating_system(n, m)
            assert is_nm_separating(fam, n, m), (n, m)
            assert len(fam) <= nm_count_bound(n, m), (n, m)


# -------------------------------------------------------------------- lifted


def test_lifted_running_example():
    g = zoo.three_cycles()
    fam = lifted_separating_system(scc_partition(g))
    expected = set()
    for i in range(1, 5):
        expected.add(frozenset(f"{c}{j}" for c in "XYZ" for j in range(1, 5) if j != i))
    assert names(g, fam) == expected
    assert is_lifted_separating(fam, scc_partition(g))


def test_lifted_trivial_cases():
    singletons = SccPartition.from_components(3, [[0], [1], [2]])
    assert lifted_separating_system(singletons).sets == (frozenset(),)
    pair = SccPartition.from_components(2, [[0, 1]])
    assert lifted_separating_system(pair).sets == (frozenset({1}), frozenset({0}))
    assert not is_lifted_separating([], pair)
    assert is_lifted_separating([frozenset()], singletons)


@settings(max_examples=500)
@given(partitions())
def test_lifted_system_property(p):
    fam = lifted_separating_system(p)
    assert is_lifted_separating(fam, p)
    assert len(fam) <= p.smax


def test_witness_lookup():
    g = zoo.three_cycles()
    p = scc_partition(g)
    fam = lifted_separating_system(p)
    x1, y3 = g.index("X1"), g.index("Y3")
    k = witness_lookup(fam, p, p.component_of[x1], x1)
    assert x1 not in fam[k] and {g.index(v) for v in ("X2", "X3", "X4")} <= fam[k]
    k = witness_lookup(fam, p, p.component_of[y3], y3)
    assert y3 not in fam[k] and {g.index(v) for v in ("Y1", "Y2", "Y4")} <= fam[k]
    with pytest.raises(BrokenInvariantError):
        witness_lookup(ExperimentFamily((frozenset(),)), p, 0, p.components[0][0])


# ------------------------------------------------------------------- bounded


def test_bounded_large_cap_matches_unbounded():
    p = scc_partition(zoo.three_cycles())
    assert set(bounded_lifted_separating_system(p, BoundedConfig(11), 12)) == set(lifted_separating_system(p))


def test_bounded_cap_three_running_example():
    p = scc_partition(zoo.three_cycles())
    fam = bounded_lifted_separating_system(p, BoundedConfig(3), 12)
    assert len(fam) == 12 and fam.max_size == 3
    assert is_lifted_separating(fam, p)
    assert len(fam) <= bounded_lifted_count_bound(12, 3, 4) == 32


def test_bounded_rejects_small_cap():
    p = scc_partition(zoo.three_cycles())
    with pytest.raises(InfeasibleBoundError):
        bounded_lifted_separating_system(p, BoundedConfig(2), 12)


def test_bounded_singletons():
    p = SccPartition.from_components(4, [[0], [1], [2], [3]])
    assert bounded_lifted_separating_system(p, BoundedConfig(1)).sets == (frozenset(),)


def test_bounded_greedy_never_overflows():
    rng = random.Random(7)
    for _ in range(1000):
        n = rng.randint(2, 200)
        perm = list(range(n))
        rng.shuffle(perm)
        smax = rng.randint(1, min(n, 12))
        blocks, i = [], 0
        while i < n:
            size = rng.randint(1, smax)
            blocks.append(perm[i:i + size])
            i += size
        p = SccPartition.from_components(n, blocks)
        m = rng.randint(max(1, p.smax - 1), n)
        fam = bounded_lifted_separating_system(p, BoundedConfig(m), n)
        assert fam.max_size <= m
        assert is_lifted_separating(fam, p)
        assert len(fam) <= bounded_lifted_count_bound(n, m, p.smax)


@settings(max_examples=300)
@given(partitions(max_n=60), st.data())
def test_bounded_property(p, data):
    m = data.draw(st.integers(max(1, p.smax - 1), max(1, p.n)))
    fam = bounded_lifted_separating_system(p, BoundedConfig(m), p.n)
    assert fam.max_size <= m and is_lifted_separating(fam, p)
    assert len(fam) <= bounded_lifted_count_bound(p.n, m, p.smax)
