"""Synthetic multicut instance generators.

IrisMP
    Complete graphs over a random subset of Iris samples projected onto
    two random measurement axes.  Similarity ``exp(-d^2 / (2 sigma^2))`` is
    clamped away from 0 and 1 and mapped through the logit, so close pairs
    attract and distant pairs repel.
RandomMP
    Union of per-node k-nearest-neighbor edges over uniform points in the
    unit square.  Weight is ``median(d) - d``: shorter than the instance
    median means attractive.  Disconnected results are bridged by
    minimum-distance edges before the weights are computed.
Scaling
    The RandomMP recipe at a fixed node count.

Instance ``i`` of a dataset with seed ``s`` draws from its own stream
``SeedSequence([s, i])``, so any subset can be regenerated independently.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc
from scipy.spatial import cKDTree

from ..graph import WeightedGraph, from_arrays
from .iris_data import IRIS

KINDS = ("IrisMP", "RandomMP", "Scaling")
LABEL_MODES = ("Exact", "GAEC", "None")


@dataclass(frozen=True)
class DatasetSpec:
    kind: str
    count: int = 1
    seed: int = 0
    label_mode: str = "None"
    exact_cap: int = 11
    # IrisMP
    points_min: int = 16
    points_max: int = 24
    sigma: float = 0.6
    clamp: float = 0.01
    # RandomMP / Scaling
    nodes_mean: float = 180.0
    nodes_std: float = 30.0
    knn_mean: float = 6.0
    knn_std: float = 2.0
    nodes: int = 0
    # RandomMP node-count ceiling (0: none); keeps exact labeling in reach
    nodes_max: int = 0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.label_mode not in LABEL_MODES:
            raise ValueError(f"label_mode must be one of {LABEL_MODES}, got {self.label_mode!r}")
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if not 2 <= self.points_min <= self.points_max <= len(IRIS):
            raise ValueError("points range must satisfy 2 <= min <= max <= 150")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if not 0 < self.clamp < 0.5:
            raise ValueError("clamp must lie in (0, 0.5)")
        if self.kind == "Scaling" and self.nodes < 2:
            raise ValueError("scaling graphs need nodes >= 2")

    def to_dict(self) -> dict:
        return asdict(self)


PRESETS = {
    "irismp": DatasetSpec("IrisMP", name="irismp"),
    "irismp-s": DatasetSpec("IrisMP", points_min=8, points_max=11, label_mode="Exact", name="irismp-s"),
    "randommp": DatasetSpec("RandomMP", name="randommp"),
    "randommp-s": DatasetSpec("RandomMP", nodes_mean=10.0, nodes_std=1.0, nodes_max=11,
                              label_mode="Exact", name="randommp-s"),
    "scaling": DatasetSpec("Scaling", nodes=1000, name="scaling"),
}


def preset(name: str, **overrides) -> DatasetSpec:
    """Named spec with field overrides, e.g. ``preset("irismp-s", count=100, seed=7)``."""
    try:
        base = PRESETS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown dataset preset {name!r}; choose from {sorted(PRESETS)}") from None
    return replace(base, **overrides)


def instance_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


# ------------------------------------------------------------------- IrisMP


def iris_graph(rng: np.random.Generator, spec: DatasetSpec) -> WeightedGraph:
    dims = rng.choice(IRIS.shape[1], 2, replace=False)
    k = int(rng.integers(spec.points_min, spec.points_max + 1))
    rows = rng.choice(len(IRIS), k, replace=False)
    pts = IRIS[rows][:, dims]
    a, b = np.triu_indices(k, 1)
    d = np.linalg.norm(pts[a] - pts[b], axis=1)
    s = np.clip(np.exp(-d ** 2 / (2.0 * spec.sigma ** 2)), spec.clamp, 1.0 - spec.clamp)
    return from_arrays(k, a, b, np.log(s / (1.0 - s)))


# ----------------------------------------------------------------- RandomMP


def _knn_edges(pts: np.ndarray, k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = len(pts)
    kmax = int(k.max())
    _, nb = cKDTree(pts).query(pts, k=kmax + 1)
    nb = nb.reshape(n, kmax + 1)[:, 1:]
    keep = np.arange(kmax)[None, :] < k[:, None]
    src = np.repeat(np.arange(n), kmax).reshape(n, kmax)[keep]
    dst = nb[keep]
    lo, hi = np.minimum(src, dst), np.maximum(src, dst)
    key = np.unique(lo.astype(np.int64) * n + hi)
    return key // n, key % n


def _bridge_components(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    """Add minimum-distance edges between components until connected.

    Each round links every component to its nearest outside point, so the
    component count at least halves per round.
    """
    n = len(pts)
    added = 0
    tree = cKDTree(pts)
    while True:
        adj = coo_matrix((np.ones(len(a)), (a, b)), shape=(n, n))
        count, comp = _cc(adj, directed=False)
        if count == 1:
            return a, b, added
        best: dict[int, tuple[float, int, int]] = {}
        kq = min(n, 16)
        dist, nb = tree.query(pts, k=kq)
        dist, nb = dist.reshape(n, kq), nb.reshape(n, kq)
        for c in range(count):
            members = np.flatnonzero(comp == c)
            outside = comp[nb[members]] != c
            hit = outside.any(axis=1)
            if hit.any():
                first = outside.argmax(axis=1)
                rows = np.flatnonzero(hit)
                dd = dist[members[rows], first[rows]]
                j = int(np.argmin(dd))
                i = int(members[rows[j]])
                best[c] = (float(dd[j]), i, int(nb[i, first[rows[j]]]))
            else:
                others = np.flatnonzero(comp != c)
                dd = np.linalg.norm(pts[members][:, None, :] - pts[others][None, :, :], axis=2)
                i, j = np.unravel_index(int(np.argmin(dd)), dd.shape)
                best[c] = (float(dd[i, j]), int(members[i]), int(others[j]))
        new = sorted({(min(i, j), max(i, j)) for _, i, j in best.values()})
        a = np.concatenate([a, np.array([e[0] for e in new], dtype=a.dtype)])
        b = np.concatenate([b, np.array([e[1] for e in new], dtype=b.dtype)])
        added += len(new)


def knn_graph(rng: np.random.Generator, n: int, spec: DatasetSpec) -> tuple[WeightedGraph, int]:
    """RandomMP-style graph on ``n`` nodes; also returns the number of bridging edges."""
    pts = rng.uniform(0.0, 1.0, size=(n, 2))
    k = np.clip(np.rint(rng.normal(spec.knn_mean, spec.knn_std, size=n)).astype(np.int64), 1, n - 1)
    a, b = _knn_edges(pts, k)
    a, b, bridges = _bridge_components(pts, a, b)
    order = np.lexsort((b, a))
    a, b = a[order], b[order]
    d = np.linalg.norm(pts[a] - pts[b], axis=1)
    return from_arrays(n, a, b, np.median(d) - d), bridges


def randommp_graph(rng: np.random.Generator, spec: DatasetSpec) -> tuple[WeightedGraph, int]:
    n = max(2, int(round(rng.normal(spec.nodes_mean, spec.nodes_std))))
    if spec.nodes_max:
        n = min(n, spec.nodes_max)
    return knn_graph(rng, n, spec)


def generate_scaling_graph(n: int, rng: np.random.Generator | int | None = None) -> WeightedGraph:
    if n < 2:
        raise ValueError("scaling graphs need at least 2 nodes")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    return knn_graph(rng, n, PRESETS["scaling"])[0]


# ------------------------------------------------------------------ drivers


def generate_graphs(spec: DatasetSpec) -> tuple[list[WeightedGraph], dict]:
    """All graphs of ``spec`` plus generation notes for the manifest."""
    graphs = []
    bridges = 0
    for i in range(spec.count):
        rng = instance_rng(spec.seed, i)
        if spec.kind == "IrisMP":
            graphs.append(iris_graph(rng, spec))
            continue
        if spec.kind == "RandomMP":
            g, added = randommp_graph(rng, spec)
        else:
            g, added = knn_graph(rng, spec.nodes, spec)
        graphs.append(g)
        bridges += added
    notes = {}
    if spec.kind == "IrisMP":
        notes["kernel"] = "exp(-d^2/(2 sigma^2))"
        notes["similarity_clamp"] = [spec.clamp, 1.0 - spec.clamp]
    else:
        notes["weight"] = "median(d) - d"
        notes["bridging_edges_added"] = bridges
    return graphs, notes
