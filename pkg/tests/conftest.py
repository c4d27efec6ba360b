import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cycdesign.graphs import DirectedGraph

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def digraphs(draw, min_n=1, max_n=7, p=None):
    """Directed graphs with cycles allowed and no self-loops."""
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    if p is None:
        mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    else:
        seed = draw(st.integers(0, 2**32 - 1))
        rng = random.Random(seed)
        mask = [rng.random() < p for _ in pairs]
    return DirectedGraph(n, frozenset(e for e, keep in zip(pairs, mask) if keep))


@st.composite
def dags(draw, min_n=1, max_n=7):
    g = draw(digraphs(min_n, max_n))
    perm = draw(st.permutations(range(g.n)))
    rank = {v: i for i, v in enumerate(perm)}
    return DirectedGraph(g.n, frozenset((u, v) for u, v in g.edges if rank[u] < rank[v]))


def random_digraph(rng: random.Random, n: int, p: float) -> DirectedGraph:
    return DirectedGraph(n, frozenset((u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p))


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
