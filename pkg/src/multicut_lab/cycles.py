"""Chordless cycle enumeration and cycle-inequality checks.

A labeling is feasible iff no cycle contains exactly one cut edge, and it
is enough to check chordless cycles.  On complete graphs the triangles
already suffice.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded
from .graph import WeightedGraph, as_labeling

DEFAULT_CYCLE_CAP = 10**7


@dataclass(frozen=True)
class ChordlessCycleSet:
    """Chordless cycles of length ``3..max_length`` in canonical form.

    ``nodes[i]`` starts at the cycle's smallest node and walks towards its
    smaller neighbor; ``cycles[i]`` lists the edge indexes along that walk,
    closing edge last.
    """

    max_length: int
    nodes: tuple[tuple[int, ...], ...]
    cycles: tuple[tuple[int, ...], ...]
    _groups: dict = field(default=None, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.cycles)

    def by_length(self) -> dict[int, np.ndarray]:
        """Edge-index matrices grouped by cycle length, ``{L: (k, L) array}``."""
        if self._groups is None:
            groups: dict[int, list] = {}
            for c in self.cycles:
                groups.setdefault(len(c), []).append(c)
            out = {L: np.array(cs, dtype=np.int64) for L, cs in sorted(groups.items())}
            object.__setattr__(self, "_groups", out)
        return self._groups

    def offset(self, edge_offset: int) -> dict[int, np.ndarray]:
        return {L: idx + edge_offset for L, idx in self.by_length().items()}


def enumerate_chordless_cycles(
    graph: WeightedGraph, l: int, cap: int = DEFAULT_CYCLE_CAP
) -> ChordlessCycleSet:
    """All chordless cycles with at most ``l`` edges.

    Paths are grown from each anchor ``s`` through nodes larger than ``s``.
    A node may join the path only if it is adjacent to no path node except
    the current tip (and possibly ``s``, in which case the cycle closes),
    so every emitted cycle is chordless without a post-filter.
    """
    if l < 3:
        raise ValueError(f"max cycle length must be >= 3, got {l}")
    nbrs = graph.neighbor_sets
    adj = [sorted(x for x in s) for s in nbrs]
    found: list[tuple[int, ...]] = []

    for s in range(graph.node_count):
        ns = nbrs[s]
        for v1 in adj[s]:
            if v1 <= s:
                continue
            # blocked = neighbors of the interior path nodes (all but s and tip)
            stack = [([s, v1], frozenset())]
            while stack:
                path, blocked = stack.pop()
                tip = path[-1]
                grow_blocked = None
                for w in adj[tip]:
                    if w <= s or w in blocked or w in path:
                        continue
                    if w in ns:
                        # w closes the cycle; only keep one orientation
                        if v1 < w:
                            found.append(tuple(path) + (w,))
                            if len(found) > cap:
                                raise BudgetExceeded(
                                    f"more than {cap} chordless cycles of length <= {l}"
                                )
                        continue
                    if len(path) + 2 <= l:
                        if grow_blocked is None:
                            grow_blocked = blocked | nbrs[tip]
                        stack.append((path + [w], grow_blocked))
    found.sort(key=lambda c: (len(c), c))
    edge_id = graph.edge_id
    cycles = tuple(
        tuple(edge_id(c[i], c[(i + 1) % len(c)]) for i in range(len(c))) for c in found
    )
    return ChordlessCycleSet(l, tuple(found), cycles)


def cycle_cut_counts(cycle_set: ChordlessCycleSet, y: np.ndarray) -> np.ndarray:
    """Number of cut edges on every cycle (grouped order of ``by_length``)."""
    counts = [y[idx].sum(axis=1) for idx in cycle_set.by_length().values()]
    return np.concatenate(counts) if counts else np.zeros(0, dtype=np.int64)


def count_cycle_violations(graph: WeightedGraph, labeling, cycle_set: ChordlessCycleSet) -> int:
    """Cycles in ``cycle_set`` that contain exactly one cut edge."""
    y = as_labeling(graph, labeling).astype(np.int64)
    return int(np.count_nonzero(cycle_cut_counts(cycle_set, y) == 1))
