"""Walk the three-cycle example through both stages and print each intermediate object."""

from cycdesign import zoo
from cycdesign.graphs import greedy_coloring, observable_skeleton_d, virtual_edges
from cycdesign.learner import learn_bounded, learn_unbounded
from cycdesign.oracle import GraphOracle
from cycdesign.sepsys import BoundedConfig


def show_sets(g, family):
    for s in family:
        print("   ", sorted(g.name(v) for v in s))


def main():
    g = zoo.three_cycles()
    print("virtual edges:", sorted(tuple(sorted((g.name(u), g.name(v)))) for u, v in virtual_edges(g)))
    coloring = greedy_coloring(observable_skeleton_d(g))
    print("greedy colors:", {g.name(v): c for v, c in enumerate(coloring.color)})
    for flavor in ("d", "sigma"):
        res = learn_unbounded(GraphOracle(g, flavor), flavor)
        print(f"[{flavor}] exact={res.graph.edges == g.edges} experiments={res.experiments_total} "
              f"bound={res.count_bound} chi={res.chi}")
        print("  stage 1 family:")
        show_sets(g, res.stage1.experiments_used)
        print("  stage 2 family:")
        show_sets(g, res.stage2_family)
    res = learn_bounded(GraphOracle(g, "d"), "d", BoundedConfig(3))
    print(f"[bounded m=3] exact={res.graph.edges == g.edges} experiments={res.experiments_total} "
          f"bound={res.count_bound} max size={res.max_experiment_size}")


if __name__ == "__main__":
    main()
