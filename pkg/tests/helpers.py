"""Random instances and independent brute-force oracles for the tests.

Nothing here imports solver or cycle code from the package; the oracles
only rely on ``networkx`` and plain enumeration.
"""

from __future__ import annotations

import itertools

import networkx as nx
import numpy as np

from multicut_lab import build_graph


def random_connected_graph(rng: np.random.Generator, n: int, m: int | None = None,
                           scale: float = 3.0):
    """Spanning tree plus random extra edges, mixed-sign weights."""
    pairs = set()
    order = rng.permutation(n)
    for i in range(1, n):
        j = int(rng.integers(0, i))
        a, b = int(order[i]), int(order[j])
        pairs.add((min(a, b), max(a, b)))
    all_pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    target = len(all_pairs) if m is None else min(m, len(all_pairs))
    target = max(target, n - 1)
    extra = [p for p in all_pairs if p not in pairs]
    rng.shuffle(extra)
    pairs.update(extra[: target - len(pairs)])
    edges = [(a, b, float(rng.normal() * scale)) for a, b in sorted(pairs)]
    perm = rng.permutation(len(edges))
    return build_graph(n, [edges[i] for i in perm])


def complete_graph(rng: np.random.Generator, n: int):
    return build_graph(n, [(a, b, float(rng.normal() * 3)) for a in range(n) for b in range(a + 1, n)])


def to_nx(graph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(graph.node_count))
    for e, (a, b) in enumerate(zip(graph.u.tolist(), graph.v.tolist())):
        G.add_edge(a, b, eid=e)
    return G


def nx_feasible(graph, y) -> bool:
    G = nx.Graph()
    G.add_nodes_from(range(graph.node_count))
    G.add_edges_from((a, b) for a, b, c in zip(graph.u.tolist(), graph.v.tolist(), y) if not c)
    comp = {}
    for k, cc in enumerate(nx.connected_components(G)):
        for x in cc:
            comp[x] = k
    return all(comp[a] != comp[b] for a, b, c in zip(graph.u.tolist(), graph.v.tolist(), y) if c)


def brute_chordless_cycles(graph, l: int) -> set[frozenset]:
    """Every chordless cycle of length 3..l as a frozenset of edge ids.

    Enumerates node subsets and their cyclic orders directly.
    """
    G = to_nx(graph)
    out = set()
    for k in range(3, min(l, graph.node_count) + 1):
        for subset in itertools.combinations(range(graph.node_count), k):
            H = G.subgraph(subset)
            # chordless cycle on exactly these nodes <=> induced subgraph is a k-cycle
            if H.number_of_edges() == k and all(d == 2 for _, d in H.degree()) and nx.is_connected(H):
                out.add(frozenset(G.edges[a, b]["eid"] for a, b in H.edges()))
    return out


def brute_min_cost(graph) -> float:
    """Minimum over feasible labelings, feasibility judged by networkx."""
    best = np.inf
    w = graph.w
    for bits in itertools.product((0, 1), repeat=graph.edge_count):
        c = float(np.dot(w, bits))
        if c < best and nx_feasible(graph, bits):
            best = c
    return best


def all_labelings(m: int) -> np.ndarray:
    return ((np.arange(1 << m)[:, None] >> np.arange(m)[None, :]) & 1).astype(np.int8)


# acceptance outcomes, printed by the terminal-summary hook in conftest
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = (bool(ok), detail)
    print(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
