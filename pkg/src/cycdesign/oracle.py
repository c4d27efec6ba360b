"""Conditional-independence oracles under hard interventions.

Two backends answer the same question, "are x and y independent given cond
under do(intervention)?":

* :class:`GraphOracle` reads the answer off the mutilated graph via d- or
  sigma-separation.
* :class:`DataOracle` samples a linear-Gaussian SCM once per intervention set
  and runs a Fisher-Z partial-correlation test.
"""

from __future__ import annotations

import functools
import hashlib
import json
import math
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Iterable, Optional

import numpy as np

from .graphs import DirectedGraph, mutilate
from .separation import SeparationFlavor, _check_query, _d_connected, effective_graph


DET_TOL = 1e-6
COND_TOL = 1e8
RHO_CLAMP = 1 - 1e-12


class SolvabilityError(ValueError):
    """(I - A) is singular or ill-conditioned for the requested intervention."""


class GenerationError(RuntimeError):
    pass


class CiTestError(ValueError):
    pass


@dataclass(frozen=True)
class CiQuery:
    x: int
    y: int
    cond: frozenset = frozenset()
    intervention: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "cond", frozenset(self.cond))
        object.__setattr__(self, "intervention", frozenset(self.intervention))


@dataclass(frozen=True)
class CiConfig:
    alpha: float = 0.01
    sample_size: int = 10_000

    def __post_init__(self):
        if not (0 < self.alpha < 1):
            raise ValueError("alpha must lie in (0, 1)")
        if self.sample_size < 1:
            raise ValueError("sample_size must be positive")


# ---------------------------------------------------------------- graph backend


def graph_oracle_ci(g: DirectedGraph, flavor, q: CiQuery) -> bool:
    """True when ``q.x`` and ``q.y`` are separated given ``q.cond`` in ``g`` mutilated by ``q.intervention``."""
    from .separation import separated

    return separated(mutilate(g, q.intervention), q.x, q.y, q.cond, flavor)


class GraphOracle:
    """Exact oracle over a hidden graph, caching per-intervention structure."""

    def __init__(self, graph: DirectedGraph, flavor="d"):
        self.graph = graph
        self.flavor = SeparationFlavor.parse(flavor)
        self.n = graph.n
        self._cache: dict = {}
        self.queries = 0

    def _structure(self, intervention: frozenset):
        hit = self._cache.get(intervention)
        if hit is None:
            h = effective_graph(mutilate(self.graph, intervention), self.flavor)
            hit = (h._children, h._parents, h.all_ancestors)
            self._cache[intervention] = hit
        return hit

    def independent(self, x: int, y: int, cond: Iterable[int] = (), intervention: Iterable[int] = ()) -> bool:
        cond = _check_query(self.graph, x, y, cond)
        ch, pa, anc = self._structure(frozenset(intervention))
        self.queries += 1
        if not cond:
            # marginal dependence iff a common ancestor exists
            return anc[x].isdisjoint(anc[y])
        anc_cond = frozenset().union(*(anc[v] for v in cond))
        return not _d_connected(ch, pa, x, y, cond, anc_cond)

    def __call__(self, q: CiQuery) -> bool:
        return self.independent(q.x, q.y, q.cond, q.intervention)


# ----------------------------------------------------------------- data backend


@dataclass(frozen=True)
class LinearScm:
    """X = A X + eps with ``A[child, parent]`` the edge weight."""

    graph: DirectedGraph
    weights: tuple  # ((u, v, w), ...)
    noise_sd: tuple

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(sorted((int(u), int(v), float(w)) for u, v, w in self.weights)))
        object.__setattr__(self, "noise_sd", tuple(float(s) for s in self.noise_sd))
        if {(u, v) for u, v, _ in self.weights} != set(self.graph.edges):
            raise ValueError("weights must cover exactly the graph's edges")
        if len(self.noise_sd) != self.graph.n or any(s <= 0 for s in self.noise_sd):
            raise ValueError("need one positive noise scale per vertex")

    @property
    def n(self) -> int:
        return self.graph.n

    def matrix(self, intervention: Iterable[int] = ()) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v, w in self.weights:
            a[v, u] = w
        for v in intervention:
            a[v, :] = 0.0
        return a

    def system(self, intervention: Iterable[int] = ()) -> np.ndarray:
        """``I - A_do``, validated for unique solvability."""
        m = np.eye(self.n) - self.matrix(intervention)
        if self.n == 0:
            return m
        det = np.linalg.det(m)
        if abs(det) < DET_TOL or np.linalg.cond(m) > COND_TOL:
            raise SolvabilityError(
                f"I - A is singular for do({sorted(intervention)}) (det={det:.3g}); SCM is not simple"
            )
        return m

    def covariance(self, intervention: Iterable[int] = ()) -> np.ndarray:
        inv = np.linalg.inv(self.system(intervention))
        return inv @ np.diag(np.square(self.noise_sd)) @ inv.T

    def to_json(self) -> dict:
        obj = {
            "n": self.n,
            "edges": [[u, v, w] for u, v, w in self.weights],
            "noise_sd": list(self.noise_sd),
        }
        if self.graph.names is not None:
            obj["names"] = list(self.graph.names)
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "LinearScm":
        n = obj.get("n", len(obj["noise_sd"]))
        edges = [(int(u), int(v)) for u, v, _ in obj["edges"]]
        g = DirectedGraph(n, frozenset(edges), obj.get("names"))
        return cls(g, tuple(tuple(e) for e in obj["edges"]), tuple(obj["noise_sd"]))


@dataclass
class Dataset:
    samples: np.ndarray
    intervention: frozenset
    seed: Optional[int]
    noise: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return self.samples.shape[0]

    @functools.cached_property
    def corr(self) -> np.ndarray:
        """Full correlation matrix, computed once and shared by every test on this dataset."""
        sd = self.samples.std(axis=0)
        if np.any(sd == 0) or not np.all(np.isfinite(sd)):
            raise CiTestError("zero-variance column; partial correlation undefined")
        return np.corrcoef(self.samples, rowvar=False)

    def to_csv(self, path, names=None) -> None:
        n = self.samples.shape[1]
        header = ",".join(names if names is not None else [str(i) for i in range(n)])
        np.savetxt(path, self.samples, delimiter=",", header=header, comments="", fmt="%.10g")


def _rng(seed, intervention: Iterable[int] = ()) -> np.random.Generator:
    # Philox is counter-based; keying on the intervention splits one stream per experiment.
    key = [int(seed), 0x5EED, *sorted(int(v) for v in intervention)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def scm_from_graph(g: DirectedGraph, seed, max_tries: int = 100) -> LinearScm:
    """Weights from [-1.5, -1] U [1, 1.5], noise variances from [0.5, 1.5]."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), 0x5C3])))
    edges = sorted(g.edges)
    for _ in range(max_tries):
        mag = rng.uniform(1.0, 1.5, size=len(edges))
        sign = rng.choice([-1.0, 1.0], size=len(edges))
        sd = np.sqrt(rng.uniform(0.5, 1.5, size=g.n))
        scm = LinearScm(g, tuple((u, v, s * w) for (u, v), s, w in zip(edges, sign, mag)), tuple(sd))
        try:
            scm.system(())
        except SolvabilityError:
            continue
        return scm
    raise GenerationError(f"no solvable coefficient draw in {max_tries} tries")


def sample(scm: LinearScm, intervention: Iterable[int], s: int, seed) -> Dataset:
    """Draw ``s`` rows solving X = A_do X + eps exactly.

    Intervened variables keep their own noise term, so under do(I) each
    X in I equals its eps.
    """
    intervention = frozenset(intervention)
    if s < 1:
        raise ValueError("need at least one sample")
    m = scm.system(intervention)
    rng = _rng(seed, intervention)
    noise = rng.standard_normal((s, scm.n)) * np.asarray(scm.noise_sd)
    x = np.linalg.solve(m, noise.T).T if scm.n else noise
    return Dataset(x, intervention, seed, noise)


def _z_critical(alpha: float) -> float:
    return NormalDist().inv_cdf(1 - alpha / 2)


def partial_correlation(data: np.ndarray, x: int, y: int, cond: Iterable[int]) -> float:
    idx = [x, y, *cond]
    sub = data[:, idx]
    sd = sub.std(axis=0)
    if np.any(sd == 0) or not np.all(np.isfinite(sd)):
        raise CiTestError("zero-variance column; partial correlation undefined")
    return _partial_from_corr(np.corrcoef(sub, rowvar=False))


def _partial_from_corr(corr: np.ndarray) -> float:
    if corr.shape[0] == 2:
        rho = corr[0, 1]
    else:
        prec = np.linalg.pinv(corr)
        prec = (prec + prec.T) / 2
        rho = -prec[0, 1] / math.sqrt(prec[0, 0] * prec[1, 1])
    return float(np.clip(rho, -RHO_CLAMP, RHO_CLAMP))


def fisher_z_statistic(data, x: int, y: int, cond: Iterable[int] = ()) -> float:
    cond = list(cond)
    s = data.size if isinstance(data, Dataset) else data.shape[0]
    if s <= len(cond) + 3:
        raise CiTestError(f"need more than {len(cond) + 3} samples, have {s}")
    if isinstance(data, Dataset):
        idx = [x, y, *cond]
        rho = _partial_from_corr(data.corr[np.ix_(idx, idx)])
    else:
        rho = partial_correlation(data, x, y, cond)
    return 0.5 * math.log((1 + rho) / (1 - rho)) * math.sqrt(s - len(cond) - 3)


def fisher_z_ci(data, x: int, y: int, cond: Iterable[int] = (), alpha: float = 0.01) -> bool:
    """True when the test fails to reject independence at level ``alpha``."""
    arr = data if isinstance(data, Dataset) else np.asarray(data)
    return abs(fisher_z_statistic(arr, x, y, cond)) <= _z_critical(alpha)


def data_oracle_ci(scm: LinearScm, q: CiQuery, cfg: CiConfig, cache: dict, seed=0) -> bool:
    ds = cache.get(q.intervention)
    if ds is None:
        ds = sample(scm, q.intervention, cfg.sample_size, seed)
        cache[q.intervention] = ds
    return fisher_z_ci(ds, q.x, q.y, q.cond, cfg.alpha)


class DataOracle:
    """One dataset per distinct intervention set, shared by every query under it."""

    def __init__(self, scm: LinearScm, cfg: CiConfig = CiConfig(), seed=0):
        self.scm = scm
        self.cfg = cfg
        self.seed = seed
        self.n = scm.n
        self.cache: dict = {}
        self.queries = 0
        self.cache_hits = 0

    def independent(self, x: int, y: int, cond: Iterable[int] = (), intervention: Iterable[int] = ()) -> bool:
        q = CiQuery(x, y, frozenset(cond), frozenset(intervention))
        _check_query(self.scm.graph, x, y, q.cond)
        if q.intervention in self.cache:
            self.cache_hits += 1
        self.queries += 1
        return data_oracle_ci(self.scm, q, self.cfg, self.cache, self.seed)

    def __call__(self, q: CiQuery) -> bool:
        return self.independent(q.x, q.y, q.cond, q.intervention)


def stable_seed(*parts) -> int:
    """Deterministic 63-bit seed from JSON-serializable parts."""
    blob = json.dumps(parts, sort_keys=True, default=str).encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big") >> 1
