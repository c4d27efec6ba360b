"""Command-line entry point: design, learn, simulate, bench and check."""

from __future__ import annotations

import argparse
import io
import json
import logging
import sys
import traceback

import numpy as np

from .bench import atomic_write_text, f1, plot_svg, run_grid, shd, summarize, write_csv
from .graphs import DirectedGraph, greedy_coloring, observable_skeleton_d, observable_skeleton_sigma, scc_partition
from .learner import SkeletonHint, learn_bounded, learn_unbounded
from .oracle import CiConfig, DataOracle, GraphOracle, LinearScm, sample, scm_from_graph
from .separation import SeparationFlavor, separated
from .sepsys import (
    BoundedConfig,
    bounded_lifted_separating_system,
    colored_separating_system,
    lifted_separating_system,
    nm_separating_system,
)

log = logging.getLogger("cycdesign")


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ graph files


def graph_to_json(g: DirectedGraph) -> str:
    """Canonical form: sorted edges, sorted keys, trailing newline."""
    obj = {"n": g.n, "edges": [list(e) for e in sorted(g.edges)]}
    if g.names is not None:
        obj["names"] = list(g.names)
    return json.dumps(obj, sort_keys=True) + "\n"


def graph_from_obj(obj: dict) -> DirectedGraph:
    if obj.get("directed", True) is False:
        raise UsageError("expected a directed graph file")
    names = obj.get("names")
    n = obj.get("n", len(names) if names else None)
    if n is None:
        raise UsageError("graph file needs 'n' or 'names'")
    edges = []
    for u, v in obj.get("edges", []):
        if isinstance(u, str) or isinstance(v, str):
            if not names:
                raise UsageError("named edges need a 'names' array")
            u, v = names.index(u), names.index(v)
        edges.append((int(u), int(v)))
    return DirectedGraph(int(n), frozenset(edges), tuple(names) if names else None)


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def load_graph(path) -> DirectedGraph:
    return graph_from_obj(load_json(path))


def _vertex(g: DirectedGraph, token: str) -> int:
    token = token.strip()
    try:
        return g.index(int(token)) if token.lstrip("-").isdigit() else g.index(token)
    except (KeyError, ValueError, IndexError):
        raise UsageError(f"unknown vertex {token!r}") from None


def _vertex_list(g: DirectedGraph, text) -> list:
    if not text:
        return []
    return [_vertex(g, t) for t in text.split(",") if t.strip()]


def _label(g: DirectedGraph, v: int):
    return g.names[v] if g.names is not None else v


def _emit(text: str, out) -> None:
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


# -------------------------------------------------------------------- commands


def cmd_design(args) -> int:
    g = load_graph(args.graph)
    flavor = SeparationFlavor.parse(args.flavor)
    if args.mode == "colored":
        skel = observable_skeleton_d(g) if flavor is SeparationFlavor.D else observable_skeleton_sigma(g)
        family = colored_separating_system(greedy_coloring(skel))
    elif args.mode == "lifted":
        family = lifted_separating_system(scc_partition(g))
    elif args.mode == "nm":
        if args.max_size is None:
            raise UsageError("--mode nm needs --max-size")
        family = nm_separating_system(g.n, args.max_size)
    else:
        if args.max_size is None:
            raise UsageError("--mode bounded-lifted needs --max-size")
        family = bounded_lifted_separating_system(scc_partition(g), BoundedConfig(args.max_size), g.n)
    _emit(json.dumps(family.to_json(g.names), sort_keys=True) + "\n", args.out)
    return 0


def cmd_check(args) -> int:
    g = load_graph(args.graph)
    x, y = _vertex(g, args.x), _vertex(g, args.y)
    cond = _vertex_list(g, args.cond)
    sep = separated(g, x, y, cond, args.flavor)
    print("separated" if sep else "connected")
    return 0


def _learn_report(res, truth) -> dict:
    report = {
        "experiments": res.experiments_total,
        "max_size": res.max_experiment_size,
        "count_bound": res.count_bound,
        "smax": res.smax,
    }
    if truth is not None:
        report["shd"] = shd(truth, res.graph)
        report["f1"] = round(f1(truth, res.graph), 6)
    return report


def cmd_learn(args) -> int:
    if bool(args.graph) == bool(args.scm):
        raise UsageError("give exactly one of --graph or --scm")
    if args.scm:
        scm = LinearScm.from_json(load_json(args.scm))
        truth = scm.graph
        oracle = DataOracle(scm, CiConfig(args.alpha, args.samples), args.seed)
        hint = SkeletonHint.parse("pc" if args.skeleton == "oracle" else args.skeleton)
        if args.skeleton == "oracle":
            log.info("exact skeleton unavailable with a data oracle; using pc")
    else:
        truth = load_graph(args.graph)
        oracle = GraphOracle(truth, args.flavor)
        hint = SkeletonHint.parse(args.skeleton)
    if args.max_size is not None:
        res = learn_bounded(oracle, args.flavor, BoundedConfig(args.max_size))
    else:
        res = learn_unbounded(oracle, args.flavor, hint)
    learned = res.graph if truth.names is None else res.graph.with_names(truth.names)
    if args.out:
        atomic_write_text(args.out, graph_to_json(learned))
    report = _learn_report(res, truth)
    if not args.quiet:
        print(" ".join(f"{k}={v}" for k, v in report.items()))
    return 0


def cmd_simulate(args) -> int:
    if bool(args.graph) == bool(args.scm):
        raise UsageError("give exactly one of --graph or --scm")
    if args.scm:
        scm = LinearScm.from_json(load_json(args.scm))
    else:
        scm = scm_from_graph(load_graph(args.graph), args.seed)
    g = scm.graph
    ds = sample(scm, _vertex_list(g, args.do), args.samples, args.seed)
    names = [str(_label(g, v)) for v in range(g.n)]
    buf = io.StringIO()
    np.savetxt(buf, ds.samples, delimiter=",", header=",".join(names), comments="", fmt="%.10g")
    _emit(buf.getvalue(), args.out)
    if args.scm_out:
        atomic_write_text(args.scm_out, json.dumps(scm.to_json(), sort_keys=True) + "\n")
    return 0


def cmd_bench(args) -> int:
    spec = load_json(args.grid)
    records = run_grid(spec, args.trials, args.seed, args.workers)
    write_csv(records, args.out)
    if args.svg:
        plot_svg(records, args.svg, x=spec.get("plot_x", "b"))
    if not args.quiet:
        for row in summarize(records):
            print(
                f"n={row['n']} p={row['p']:.4g} b={row['b']} {row['flavor']}/{row['mode']} "
                f"samples={row['samples']}: experiments={row['experiments']:.2f}"
                f"±{row['experiments_ci']:.2f} shd/n={row['shd_per_n']:.3f} f1={row['f1']:.3f}"
                + (f" errors={row['errors']}" if row["errors"] else "")
            )
    return 0


# ----------------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--quiet", action="store_true")
    common.add_argument("--verbose", action="store_true")

    # global flags live on each subcommand so their defaults never shadow each other
    p = _Parser(prog="cycdesign", description="Experiment design for learning cyclic causal graphs.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    d = sub.add_parser("design", parents=[common], help="emit an experiment family as JSON")
    d.add_argument("--graph", required=True)
    d.add_argument("--mode", choices=["colored", "lifted", "nm", "bounded-lifted"], default="colored")
    d.add_argument("--max-size", type=int)
    d.add_argument("--flavor", choices=["d", "sigma"], default="d")
    d.add_argument("--out")
    d.set_defaults(func=cmd_design)

    c = sub.add_parser("check", parents=[common], help="decide one separation statement")
    c.add_argument("--graph", required=True)
    c.add_argument("--flavor", choices=["d", "sigma"], default="d")
    c.add_argument("--x", required=True)
    c.add_argument("--y", required=True)
    c.add_argument("--cond", default="")
    c.set_defaults(func=cmd_check)

    lr = sub.add_parser("learn", parents=[common], help="run the two-stage learner")
    lr.add_argument("--graph")
    lr.add_argument("--scm")
    lr.add_argument("--samples", type=int, default=10_000)
    lr.add_argument("--alpha", type=float, default=0.01)
    lr.add_argument("--flavor", choices=["d", "sigma"], default="d")
    lr.add_argument("--max-size", type=int)
    lr.add_argument("--skeleton", choices=["oracle", "pc", "complete"], default="oracle")
    lr.add_argument("--out")
    lr.set_defaults(func=cmd_learn)

    s = sub.add_parser("simulate", parents=[common], help="sample a linear-Gaussian SCM under do()")
    s.add_argument("--graph")
    s.add_argument("--scm")
    s.add_argument("--do", default="")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--out")
    s.add_argument("--scm-out")
    s.set_defaults(func=cmd_simulate)

    b = sub.add_parser("bench", parents=[common], help="run a trial grid and write CSV")
    b.add_argument("--grid", required=True)
    b.add_argument("--trials", type=int, default=10)
    b.add_argument("--out", required=True)
    b.add_argument("--svg")
    b.add_argument("--workers", type=int, default=1)
    b.set_defaults(func=cmd_bench)
    return p


def _validate(args) -> None:
    for name in ("samples", "trials", "workers"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            raise UsageError(f"--{name} must be positive")
    if getattr(args, "max_size", None) is not None and args.max_size < 1:
        raise UsageError("--max-size must be at least 1")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    verbose = "--verbose" in argv
    try:
        args = build_parser().parse_args(argv)
        _validate(args)
    except UsageError as exc:
        print(f"cycdesign: usage error: {exc}", file=sys.stderr)
        return 2
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"cycdesign: usage error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        if verbose:
            traceback.print_exc()
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"cycdesign: error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
