"""Random graph generation, lower-bound constructions, metrics and the trial grid."""

from __future__ import annotations

import csv
import dataclasses
import enum
import itertools
import json
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .graphs import DirectedGraph
from .learner import SkeletonHint, learn_bounded, learn_unbounded
from .oracle import CiConfig, DataOracle, GraphOracle, scm_from_graph, stable_seed
from .sepsys import BoundedConfig


@dataclass(frozen=True)
class SbmConfig:
    n: int
    p: float
    b: int

    def __post_init__(self):
        if not (0 <= self.p <= 1):
            raise ValueError("p must lie in [0, 1]")
        if not (1 <= self.b <= max(self.n, 1)):
            raise ValueError("block size must lie in [1, n]")


def sbm_blocks(n: int, b: int, rng: np.random.Generator) -> list:
    perm = [int(v) for v in rng.permutation(n)]
    return [perm[i:i + b] for i in range(0, n, b)]


def sbm_generate(cfg: SbmConfig, seed) -> DirectedGraph:
    """Blocks of size ``b`` (last one may be short) over a random vertex order.

    Inside a block each direction appears independently with probability p;
    across blocks only the earlier-to-later direction can appear.
    """
    rng = np.random.default_rng(seed)
    blocks = sbm_blocks(cfg.n, cfg.b, rng)
    block_of = {}
    for k, blk in enumerate(blocks):
        for v in blk:
            block_of[v] = k
    edges = []
    for u in range(cfg.n):
        for v in range(cfg.n):
            if u == v or block_of[u] > block_of[v]:
                continue
            if rng.random() < cfg.p:
                edges.append((u, v))
    return DirectedGraph(cfg.n, frozenset(edges))


class LowerBoundVariant(str, enum.Enum):
    SIZE = "size"
    COUNT = "count"


def complete_cluster(n: int, c: int) -> DirectedGraph:
    """Two-way complete graph on vertices 0..c-1; the rest are isolated."""
    if not (1 < c <= n):
        raise ValueError("need 1 < c <= n")
    return DirectedGraph(n, frozenset((u, v) for u in range(c) for v in range(c) if u != v))


def worst_case_pair(n: int, c: int, variant=LowerBoundVariant.SIZE, family=None):
    """The hard graph and a one-edge-deleted twin that bounded designs confuse with it.

    For the size bound the deleted edge is (0, 1).  For the count bound the
    twin depends on the family: it picks a cluster vertex ``i`` whose
    leave-one-out set ``V_c - {i}`` is not the trace of any experiment on the
    cluster, and deletes the edge (j, i) for the smallest other ``j``.
    """
    variant = LowerBoundVariant(variant)
    g = complete_cluster(n, c)
    if variant is LowerBoundVariant.SIZE:
        removed = (0, 1)
    else:
        cluster = frozenset(range(c))
        traces = {frozenset(s) & cluster for s in (family or ())}
        i_star = next((i for i in range(c) if cluster - {i} not in traces), None)
        if i_star is None:
            raise ValueError("family covers every leave-one-out set; no twin exists")
        j_star = next(j for j in range(c) if j != i_star)
        removed = (j_star, i_star)
    return g, DirectedGraph(n, g.edges - {removed})


def edge_counts(g_true: DirectedGraph, g_learned: DirectedGraph) -> tuple:
    if g_true.n != g_learned.n:
        raise ValueError("graphs must share a vertex set")
    tp = len(g_true.edges & g_learned.edges)
    fp = len(g_learned.edges - g_true.edges)
    fn = len(g_true.edges - g_learned.edges)
    return tp, fp, fn


def shd(g_true: DirectedGraph, g_learned: DirectedGraph) -> int:
    _, fp, fn = edge_counts(g_true, g_learned)
    return fp + fn


def f1(g_true: DirectedGraph, g_learned: DirectedGraph) -> float:
    tp, fp, fn = edge_counts(g_true, g_learned)
    if tp == 0:
        return 1.0 if fp + fn == 0 else 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2 * precision * recall / (precision + recall)


# ------------------------------------------------------------------ trial grid


@dataclass
class TrialRecord:
    seed: int
    n: int
    p: float
    b: int
    flavor: str
    mode: str
    m: Optional[int]
    samples: int
    experiments: Optional[int]
    max_size: Optional[int]
    shd: Optional[int]
    f1: Optional[float]
    wall_ms: float = dataclasses.field(compare=False)
    status: str = "ok"


CSV_FIELDS = [f.name for f in dataclasses.fields(TrialRecord)]


@dataclass(frozen=True)
class Cell:
    n: int
    p: float
    b: int
    flavor: str = "d"
    mode: str = "unbounded"
    m: Optional[object] = None  # int, or "smax-1" / "2smax" resolved per graph
    samples: int = 0  # 0 selects the exact graph oracle
    skeleton: str = "oracle"

    def key(self) -> dict:
        return dataclasses.asdict(self)


def resolve_p(p, n: int) -> float:
    """Edge probability from a number or an expression such as ``"log(n)/n"``."""
    if isinstance(p, (int, float)):
        return float(p)
    return float(eval(str(p), {"__builtins__": {}}, {"n": n, "log": math.log, "sqrt": math.sqrt}))


def expand_grid(spec: dict) -> list:
    """Cartesian product over list-valued keys of a grid spec."""
    keys = ["n", "p", "b", "flavor", "mode", "m", "samples", "skeleton"]
    axes = []
    for k in keys:
        v = spec.get(k, getattr(Cell, k, None) if k not in ("n", "p", "b") else None)
        if v is None and k in ("n", "p", "b"):
            raise ValueError(f"grid spec needs {k!r}")
        axes.append(v if isinstance(v, list) else [v])
    cells = []
    for combo in itertools.product(*axes):
        d = dict(zip(keys, combo))
        n = int(d["n"])
        b = n if d["b"] in ("n", None) else min(int(d["b"]), n)
        cells.append(Cell(n, resolve_p(d["p"], n), b, d["flavor"], d["mode"], d["m"],
                          int(d["samples"]), d["skeleton"]))
    return cells


def _resolve_m(m, g: DirectedGraph) -> int:
    from .graphs import scc_partition

    smax = scc_partition(g).smax
    if m is None or m == "smax-1":
        val = smax - 1
    elif m == "2smax":
        val = 2 * smax
    else:
        val = int(m)
    return min(max(1, val), max(1, g.n - 1))


def run_trial(cell: Cell, trial: int, master_seed: int) -> TrialRecord:
    seed = stable_seed(master_seed, cell.key(), trial)
    t0 = time.perf_counter()
    m_used = None
    try:
        g = sbm_generate(SbmConfig(cell.n, cell.p, cell.b), seed)
        if cell.samples > 0:
            scm = scm_from_graph(g, seed)
            oracle = DataOracle(scm, CiConfig(0.01, cell.samples), seed)
            hint = SkeletonHint.parse("pc" if cell.skeleton == "oracle" else cell.skeleton)
        else:
            oracle = GraphOracle(g, cell.flavor)
            hint = SkeletonHint.parse(cell.skeleton)
        if cell.mode == "bounded":
            m_used = _resolve_m(cell.m, g)
            res = learn_bounded(oracle, cell.flavor, BoundedConfig(m_used))
        else:
            res = learn_unbounded(oracle, cell.flavor, hint)
        return TrialRecord(seed, cell.n, cell.p, cell.b, cell.flavor, cell.mode, m_used, cell.samples,
                           res.experiments_total, res.max_experiment_size, shd(g, res.graph),
                           f1(g, res.graph), (time.perf_counter() - t0) * 1e3)
    except Exception as exc:  # recorded per row; the grid keeps going
        return TrialRecord(seed, cell.n, cell.p, cell.b, cell.flavor, cell.mode, m_used, cell.samples,
                           None, None, None, None, (time.perf_counter() - t0) * 1e3,
                           f"error: {type(exc).__name__}: {exc}")


def _run_job(args):
    return run_trial(*args)


def run_grid(spec, trials: int, seed: int = 0, workers: int = 1) -> list:
    cells = expand_grid(spec) if isinstance(spec, dict) else list(spec)
    jobs = [(cell, t, seed) for cell in cells for t in range(trials)]
    if workers <= 1:
        return [_run_job(j) for j in jobs]
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(_run_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def summarize(records: Sequence[TrialRecord]) -> list:
    """Mean and 90% normal-approximation interval per cell and metric."""
    groups: dict = {}
    for r in records:
        key = (r.n, r.p, r.b, r.flavor, r.mode, r.samples)
        groups.setdefault(key, []).append(r)
    out = []
    for key, rows in groups.items():
        ok = [r for r in rows if r.status == "ok"]
        row = dict(zip(("n", "p", "b", "flavor", "mode", "samples"), key))
        row["trials"] = len(rows)
        row["errors"] = len(rows) - len(ok)
        for metric in ("experiments", "max_size", "shd", "f1"):
            vals = np.array([getattr(r, metric) for r in ok], dtype=float)
            if metric == "shd":
                vals = vals / key[0]
                metric = "shd_per_n"
            mean = float(vals.mean()) if len(vals) else float("nan")
            half = 1.645 * float(vals.std(ddof=1)) / math.sqrt(len(vals)) if len(vals) > 1 else 0.0
            row[metric] = mean
            row[metric + "_ci"] = half
        out.append(row)
    return out


def atomic_write_text(path, text: str) -> None:
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def records_to_csv(records: Iterable[TrialRecord]) -> str:
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in records:
        w.writerow(["" if v is None else v for v in dataclasses.astuple(r)])
    return buf.getvalue()


def write_csv(records: Iterable[TrialRecord], path) -> None:
    atomic_write_text(path, records_to_csv(records))


def plot_svg(records: Sequence[TrialRecord], outdir, x: str = "b") -> list:
    """One line chart per metric, x axis ``x``, one line per remaining cell key."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(outdir, exist_ok=True)
    summary = summarize(records)
    written = []
    for metric in ("experiments", "shd_per_n", "f1"):
        fig, ax = plt.subplots(figsize=(4, 3))
        series: dict = {}
        for row in summary:
            label = ", ".join(f"{k}={row[k]}" for k in ("n", "p", "b", "samples") if k != x)
            series.setdefault(label, []).append((row[x], row[metric], row[metric + "_ci"]))
        for label, pts in sorted(series.items()):
            pts.sort()
            xs, ys, es = zip(*pts)
            ax.errorbar(xs, ys, yerr=es, marker="o", capsize=2, label=label)
        ax.set_xlabel(x)
        ax.set_ylabel(metric)
        if len(series) <= 6:
            ax.legend(fontsize=6)
        fig.tight_layout()
        path = os.path.join(outdir, f"{metric}.svg")
        fig.savefig(path, format="svg")
        plt.close(fig)
        written.append(path)
    return written


def load_grid(path) -> dict:
    with open(path) as fh:
        return json.load(fh)
