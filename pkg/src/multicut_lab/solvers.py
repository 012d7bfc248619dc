"""Exact and greedy multicut solvers.

* :func:`exact_partition_solver` enumerates every set partition of the
  nodes (restricted growth strings) and keeps the cheapest.
* :func:`exact_edge_label_oracle` enumerates every edge labeling, discards
  infeasible ones and keeps the cheapest; it shares no code path with the
  partition solver and serves as its oracle.
* :func:`gaec` is greedy additive edge contraction with an optional time
  budget.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import TooLarge
from .graph import WeightedGraph, labeling_from_partition, multicut_cost

OPTIMAL = "Optimal"
HEURISTIC = "Heuristic"
BUDGET_EXPIRED = "BudgetExpired"

DEFAULT_EXACT_CAP = 12
DEFAULT_ORACLE_EDGE_CAP = 22


@dataclass(frozen=True)
class SolveResult:
    labeling: np.ndarray
    objective: float
    wall_time: float
    status: str


# ---------------------------------------------------------------- partitions


@lru_cache(maxsize=4)
def restricted_growth_strings(n: int) -> np.ndarray:
    """All restricted growth strings of length ``n`` in lexicographic order.

    Row ``r`` assigns block ``rgs[r, i]`` to element ``i``; ``rgs[r, 0] == 0``
    and every entry exceeds the running maximum by at most one.  There are
    Bell(n) rows.
    """
    if n < 1:
        raise ValueError("n must be positive")
    table = np.zeros((1, 1), dtype=np.int8)
    peak = np.zeros(1, dtype=np.int8)
    for _ in range(1, n):
        # each row spawns peak+2 children: values 0..peak+1
        fan = peak.astype(np.int64) + 2
        parent = np.repeat(np.arange(len(table)), fan)
        starts = np.cumsum(fan) - fan
        value = (np.arange(len(parent)) - np.repeat(starts, fan)).astype(np.int8)
        table = np.concatenate([table[parent], value[:, None]], axis=1)
        peak = np.maximum(peak[parent], value)
    table.flags.writeable = False
    return table


def exact_partition_solver(
    graph: WeightedGraph, cap: int = DEFAULT_EXACT_CAP, chunk: int = 1 << 18
) -> SolveResult:
    """Globally optimal multicut by enumerating all set partitions.

    Ties go to the first partition in restricted-growth order.
    """
    n = graph.node_count
    if n > cap:
        raise TooLarge(n, cap)
    t0 = time.perf_counter()
    rgs = restricted_growth_strings(n)
    u, v, w = graph.u, graph.v, graph.w
    best_cost = np.inf
    best_row = 0
    for lo in range(0, len(rgs), chunk):
        block = rgs[lo:lo + chunk]
        cost = np.zeros(len(block))
        for a, b, we in zip(u.tolist(), v.tolist(), w.tolist()):
            cost += we * (block[:, a] != block[:, b])
        i = int(np.argmin(cost))
        if cost[i] < best_cost:
            best_cost = cost[i]
            best_row = lo + i
    y = labeling_from_partition(graph, rgs[best_row].astype(np.int64))
    elapsed = time.perf_counter() - t0
    return SolveResult(y, multicut_cost(graph, y), elapsed, OPTIMAL)


# ------------------------------------------------------------ labeling oracle


def _feasible_mask(graph: WeightedGraph, labels: np.ndarray) -> np.ndarray:
    """Feasibility of many labelings at once (rows of ``labels``).

    Node labels are propagated along kept edges until stable, then a
    labeling is feasible iff every cut edge joins different labels.
    """
    b = labels.shape[0]
    comp = np.tile(np.arange(graph.node_count, dtype=np.int16), (b, 1))
    kept = labels == 0
    pairs = list(zip(graph.u.tolist(), graph.v.tolist()))
    while True:
        changed = False
        for e, (a, c) in enumerate(pairs):
            k = kept[:, e]
            ca, cc = comp[:, a], comp[:, c]
            low = np.minimum(ca, cc)
            upd = k & (ca != cc)
            if upd.any():
                changed = True
                comp[upd, a] = low[upd]
                comp[upd, c] = low[upd]
        if not changed:
            break
    cut = ~kept
    same = comp[:, graph.u] == comp[:, graph.v]
    return ~np.any(cut & same, axis=1)


def exact_edge_label_oracle(
    graph: WeightedGraph, cap: int = DEFAULT_ORACLE_EDGE_CAP, chunk: int = 1 << 16
) -> SolveResult:
    """Brute force over all ``2**m`` labelings; slow but independent."""
    m = graph.edge_count
    if m > cap:
        raise TooLarge(m, cap, what="edge_count")
    t0 = time.perf_counter()
    bits = np.arange(m, dtype=np.int64)
    best_cost = np.inf
    best_code = 0
    for lo in range(0, 1 << m, chunk):
        codes = np.arange(lo, min(lo + chunk, 1 << m), dtype=np.int64)
        labels = ((codes[:, None] >> bits) & 1).astype(np.int8)
        cost = labels @ graph.w
        # only labelings that would improve on the incumbent need the feasibility pass
        cand = np.flatnonzero(cost < best_cost)
        if cand.size == 0:
            continue
        ok = _feasible_mask(graph, labels[cand])
        if not ok.any():
            continue
        sub = np.where(ok, cost[cand], np.inf)
        i = int(np.argmin(sub))
        best_cost = sub[i]
        best_code = int(codes[cand[i]])
    y = ((best_code >> bits) & 1).astype(np.int8)
    elapsed = time.perf_counter() - t0
    return SolveResult(y, multicut_cost(graph, y), elapsed, OPTIMAL)


# ---------------------------------------------------------------------- GAEC


def gaec(graph: WeightedGraph, time_budget: float | None = None) -> SolveResult:
    """Greedy additive edge contraction.

    Repeatedly contracts the heaviest remaining edge while its weight is
    strictly positive; parallel edges created by a contraction are merged
    by summing their weights.  Ties go to the edge whose smallest original
    edge index is lowest.  With ``time_budget`` (seconds) the loop may stop
    early, returning the clusters formed so far with status
    ``BudgetExpired``.
    """
    t0 = time.perf_counter()
    deadline = None if time_budget is None else t0 + time_budget
    n = graph.node_count
    parent = list(range(n))
    size = [1] * n
    version = [0] * n
    # nbrs[a][b] = [weight, smallest original edge id] for cluster roots a, b
    nbrs: list[dict[int, list]] = [dict() for _ in range(n)]
    heap = []
    for e, (a, b, w) in enumerate(zip(graph.u.tolist(), graph.v.tolist(), graph.w.tolist())):
        entry = [w, e]
        nbrs[a][b] = entry
        nbrs[b][a] = entry
        if w > 0:
            heap.append((-w, e, a, b, 0, 0))
    heapq.heapify(heap)

    status = HEURISTIC
    while heap:
        if deadline is not None and time.perf_counter() >= deadline:
            status = BUDGET_EXPIRED
            break
        negw, _, a, b, va, vb = heapq.heappop(heap)
        if parent[a] != a or parent[b] != b or version[a] != va or version[b] != vb:
            continue
        if size[a] < size[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]
        version[a] += 1
        version[b] += 1
        na, nb = nbrs[a], nbrs[b]
        del na[b]
        del nb[a]
        for c, (wc, ec) in nb.items():
            nc = nbrs[c]
            del nc[b]
            if c in na:
                entry = na[c]
                entry[0] += wc
                entry[1] = min(entry[1], ec)
            else:
                entry = [wc, ec]
                na[c] = entry
            nc[a] = entry
        nbrs[b] = {}
        va = version[a]
        for c, (wc, ec) in na.items():
            if wc > 0:
                heapq.heappush(heap, (-wc, ec, a, c, va, version[c]) if a < c else (-wc, ec, c, a, version[c], va))

    roots = np.array([_find(parent, i) for i in range(n)])
    y = (roots[graph.u] != roots[graph.v]).astype(np.int8)
    elapsed = time.perf_counter() - t0
    return SolveResult(y, multicut_cost(graph, y), elapsed, status)


def _find(parent: list[int], x: int) -> int:
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root
