"""Small named graphs used as worked examples and regression fixtures."""

from __future__ import annotations

from .graphs import DirectedGraph


def feedback_loop() -> DirectedGraph:
    """Closed-loop controller: X1 -> X2 -> X3 -> X4 -> X2."""
    names = ("X1", "X2", "X3", "X4")
    return DirectedGraph.from_named(names, [("X1", "X2"), ("X2", "X3"), ("X3", "X4"), ("X4", "X2")])


def virtual_edge_cycle() -> DirectedGraph:
    """Y feeds a 4-cycle X1 -> X2 -> X3 -> X4 -> X1; Y and X4 share the child X1."""
    names = ("Y", "X1", "X2", "X3", "X4")
    return DirectedGraph.from_named(
        names, [("Y", "X1"), ("X1", "X2"), ("X2", "X3"), ("X3", "X4"), ("X4", "X1")]
    )


def three_cycles() -> DirectedGraph:
    """Three directed 4-cycles X, Y, Z chained by forward cross edges (18 edges)."""
    names = tuple(f"{c}{i}" for c in "XYZ" for i in range(1, 5))
    edges = []
    for c in "XYZ":
        for i in range(1, 5):
            edges.append((f"{c}{i}", f"{c}{i % 4 + 1}"))
    edges += [("X2", "Y2"), ("X3", "Y3"), ("X4", "Y4"), ("Y1", "Z1"), ("Y2", "Z2"), ("Y4", "Z4")]
    return DirectedGraph.from_named(names, edges)


def triangle_variants() -> list:
    """Four graphs on X, Y, Z that singleton experiments cannot tell apart.

    The first is the complete two-way triangle; each other one keeps only one
    direction of a single pair.
    """
    names = ("X", "Y", "Z")
    full = [("X", "Z"), ("Z", "X"), ("X", "Y"), ("Y", "X"), ("Z", "Y"), ("Y", "Z")]
    out = [DirectedGraph.from_named(names, full)]
    for drop in [("Y", "X"), ("X", "Y"), ("Z", "Y")]:
        out.append(DirectedGraph.from_named(names, [e for e in full if e != drop]))
    return out
