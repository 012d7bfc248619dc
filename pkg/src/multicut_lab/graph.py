"""Multicut instances, cost evaluation and feasibility.

A multicut instance is a simple, connected, undirected graph with a real
weight on every edge.  A labeling ``y`` assigns 1 to cut edges and 0 to
kept edges; its cost is ``sum(w[e] * y[e])``.  Positive weights are
attractive (cutting them costs), negative weights are repulsive.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc

from .errors import (
    Disconnected,
    DuplicateEdge,
    EmptyInput,
    EndpointOutOfRange,
    LengthMismatch,
    SelfLoop,
)

__all__ = [
    "WeightedGraph",
    "NodePartition",
    "build_graph",
    "multicut_cost",
    "connected_components",
    "is_feasible",
    "labeling_from_partition",
    "optimal_objective_ratio",
    "harmonic_mean",
    "as_labeling",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


class WeightedGraph:
    """Immutable weighted graph with canonical ``u < v`` edges.

    Build instances through :func:`build_graph`; the constructor trusts
    its inputs.
    """

    __slots__ = ("node_count", "u", "v", "w", "__dict__")

    def __init__(self, node_count: int, u: np.ndarray, v: np.ndarray, w: np.ndarray):
        self.node_count = int(node_count)
        self.u = _readonly(np.asarray(u, dtype=np.int64))
        self.v = _readonly(np.asarray(v, dtype=np.int64))
        self.w = _readonly(np.asarray(w, dtype=np.float64))

    @property
    def edge_count(self) -> int:
        return len(self.w)

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.u.tolist(), self.v.tolist(), self.w.tolist()))

    @cached_property
    def _csr(self):
        # directed half-edges sorted by source; data holds edge index
        n, m = self.node_count, self.edge_count
        src = np.concatenate([self.u, self.v])
        dst = np.concatenate([self.v, self.u])
        eid = np.concatenate([np.arange(m), np.arange(m)])
        order = np.lexsort((dst, src))
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)
        return indptr, _readonly(dst[order]), _readonly(eid[order])

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per node: ``(neighbor, edge_index)`` pairs sorted by neighbor."""
        indptr, nbr, eid = self._csr
        nbr_l, eid_l = nbr.tolist(), eid.tolist()
        return tuple(
            tuple(zip(nbr_l[indptr[i]:indptr[i + 1]], eid_l[indptr[i]:indptr[i + 1]]))
            for i in range(self.node_count)
        )

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(x for x, _ in adj) for adj in self.adjacency)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {(a, b): i for i, (a, b) in enumerate(zip(self.u.tolist(), self.v.tolist()))}

    def edge_id(self, a: int, b: int) -> int:
        return self.edge_index[(a, b) if a < b else (b, a)]

    @cached_property
    def pos_degree(self) -> np.ndarray:
        wp = np.where(self.w > 0, self.w, 0.0)
        return _readonly(self._node_sum(wp))

    @cached_property
    def neg_degree(self) -> np.ndarray:
        wn = np.where(self.w < 0, self.w, 0.0)
        return _readonly(self._node_sum(wn))

    @cached_property
    def abs_degree(self) -> np.ndarray:
        """Signed degree: sum of ``|w|`` over incident edges."""
        return _readonly(self.pos_degree - self.neg_degree)

    def _node_sum(self, values: np.ndarray) -> np.ndarray:
        out = np.bincount(self.u, weights=values, minlength=self.node_count)
        out += np.bincount(self.v, weights=values, minlength=self.node_count)
        return out

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and np.array_equal(self.u, other.u)
            and np.array_equal(self.v, other.v)
            and np.array_equal(self.w, other.w)
        )

    __hash__ = None

    def __repr__(self):
        return f"WeightedGraph(node_count={self.node_count}, edge_count={self.edge_count})"


@dataclass(frozen=True)
class NodePartition:
    """Dense cluster ids per node, numbered by smallest contained node."""

    component_id: np.ndarray

    @property
    def count(self) -> int:
        return int(self.component_id.max()) + 1 if len(self.component_id) else 0

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.count)]
        for node, c in enumerate(self.component_id.tolist()):
            out[c].append(node)
        return out

    def __eq__(self, other):
        if not isinstance(other, NodePartition):
            return NotImplemented
        return np.array_equal(self.component_id, other.component_id)

    __hash__ = None


def build_graph(node_count: int, edge_list) -> WeightedGraph:
    """Validate and canonicalize an edge list into a :class:`WeightedGraph`.

    ``edge_list`` is an iterable of ``(u, v, w)`` triples or an ``(m, 3)``
    array.  Edge indexes follow input order; endpoints are swapped so that
    ``u < v``.
    """
    node_count = int(node_count)
    if node_count < 1:
        raise EmptyInput("node_count must be positive")
    if isinstance(edge_list, np.ndarray):
        arr = edge_list
        if arr.ndim != 2 or arr.shape[1] != 3:
            raise ValueError("edge array must have shape (m, 3)")
        a, b, w = arr[:, 0], arr[:, 1], arr[:, 2]
    else:
        triples = list(edge_list)
        a = [t[0] for t in triples]
        b = [t[1] for t in triples]
        w = [t[2] for t in triples]
    return from_arrays(node_count, a, b, w)


def from_arrays(node_count: int, a, b, w) -> WeightedGraph:
    """Array form of :func:`build_graph`."""
    a = np.asarray(a)
    b = np.asarray(b)
    w = np.asarray(w, dtype=np.float64)
    if len(w) == 0:
        raise EmptyInput("edge list is empty")
    if not (np.all(a == np.round(a)) and np.all(b == np.round(b))):
        raise EndpointOutOfRange("endpoints must be integers")
    a = a.astype(np.int64)
    b = b.astype(np.int64)
    bad = np.flatnonzero((a < 0) | (a >= node_count) | (b < 0) | (b >= node_count))
    if len(bad):
        i = int(bad[0])
        raise EndpointOutOfRange(
            f"edge {i} ({a[i]}, {b[i]}) has an endpoint outside 0..{node_count - 1}"
        )
    loops = np.flatnonzero(a == b)
    if len(loops):
        i = int(loops[0])
        raise SelfLoop(f"edge {i} is a self-loop on node {a[i]}")
    if not np.all(np.isfinite(w)):
        i = int(np.flatnonzero(~np.isfinite(w))[0])
        raise ValueError(f"edge {i} has non-finite weight {w[i]}")
    u = np.minimum(a, b)
    v = np.maximum(a, b)
    key = u * node_count + v
    _, first, counts = np.unique(key, return_index=True, return_counts=True)
    if np.any(counts > 1):
        dup_key = _[np.flatnonzero(counts > 1)[0]]
        idx = np.flatnonzero(key == dup_key)
        raise DuplicateEdge(
            f"edges {idx[0]} and {idx[1]} both connect {u[idx[0]]} and {v[idx[0]]}"
        )
    ncomp, labels = _components(node_count, u, v)
    if ncomp > 1:
        lonely = int(np.flatnonzero(labels != labels[0])[0])
        raise Disconnected(
            f"graph has {ncomp} connected components; node {lonely} is not reachable from node 0"
        )
    return WeightedGraph(node_count, u, v, w)


def _components(n: int, u: np.ndarray, v: np.ndarray) -> tuple[int, np.ndarray]:
    mat = coo_matrix((np.ones(len(u), dtype=np.int8), (u, v)), shape=(n, n))
    return _cc(mat, directed=False)


def as_labeling(graph: WeightedGraph, labeling) -> np.ndarray:
    y = np.asarray(labeling)
    if y.ndim != 1 or len(y) != graph.edge_count:
        raise LengthMismatch(
            f"labeling has length {y.size if y.ndim else 0}, graph has {graph.edge_count} edges"
        )
    return y.astype(np.int8, copy=False)


def multicut_cost(graph: WeightedGraph, labeling) -> float:
    y = as_labeling(graph, labeling)
    return float(np.dot(graph.w, y))


def connected_components(graph: WeightedGraph, labeling) -> NodePartition:
    """Components of the subgraph that keeps only edges with ``y = 0``."""
    y = as_labeling(graph, labeling)
    keep = y == 0
    _, labels = _components(graph.node_count, graph.u[keep], graph.v[keep])
    return NodePartition(_canonical_ids(labels))


def _canonical_ids(labels: np.ndarray) -> np.ndarray:
    # renumber so cluster ids increase with their smallest node
    uniq, first = np.unique(labels, return_index=True)
    rank = np.empty(len(uniq), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(uniq))
    lookup = np.empty(int(uniq.max()) + 1, dtype=np.int64)
    lookup[uniq] = rank
    return _readonly(lookup[labels])


def partition_from_ids(ids: Sequence[int]) -> NodePartition:
    return NodePartition(_canonical_ids(np.asarray(ids, dtype=np.int64)))


def is_feasible(graph: WeightedGraph, labeling) -> bool:
    """True iff no cut edge joins two nodes of the same component."""
    y = as_labeling(graph, labeling)
    comp = connected_components(graph, y).component_id
    cut = y != 0
    return bool(np.all(comp[graph.u[cut]] != comp[graph.v[cut]]))


def labeling_from_partition(graph: WeightedGraph, partition) -> np.ndarray:
    ids = partition.component_id if isinstance(partition, NodePartition) else np.asarray(partition)
    if len(ids) != graph.node_count:
        raise LengthMismatch(f"partition covers {len(ids)} nodes, graph has {graph.node_count}")
    return (ids[graph.u] != ids[graph.v]).astype(np.int8)


def optimal_objective_ratio(cost: float, optimal_cost: float) -> float:
    """``max(0, cost / optimal_cost)`` clipped to [0, 1].

    When the optimum is 0 (no profitable cut exists) the ratio is 1 for a
    zero-cost answer and 0 otherwise.
    """
    if optimal_cost == 0:
        return 1.0 if cost == 0 else 0.0
    return float(min(1.0, max(0.0, cost / optimal_cost)))


def harmonic_mean(ratios: Iterable[float]) -> float:
    r = np.asarray(list(ratios), dtype=np.float64)
    if r.size == 0:
        raise EmptyInput("harmonic mean of no values")
    if np.any(r <= 0):
        return 0.0
    return float(len(r) / np.sum(1.0 / r))
