"""Signed-Laplacian message coefficients and degree features."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graph import WeightedGraph


@dataclass(frozen=True)
class SignedMessageIndex:
    """Directed message list for one graph (or a batch of them).

    Message ``i`` carries ``coeff[i] * h[src[i]]`` into node ``dst[i]``.
    Every undirected edge appears once per direction, so ``src``/``dst``
    have length ``2m``.  ``self_coeff`` scales each node's own term.
    """

    node_count: int
    src: np.ndarray
    dst: np.ndarray
    coeff: np.ndarray
    weight: np.ndarray
    self_coeff: np.ndarray


def signed_message_index(graph: WeightedGraph, normalize_self_term: bool = False) -> SignedMessageIndex:
    """Coefficients ``w_uv / sqrt(deg(u) * deg(v))`` with ``deg(u) = sum |w|``.

    With ``normalize_self_term`` every node gets a unit self-loop: it is
    added to the signed degree and the self term is scaled by
    ``1 / deg(u)``, mirroring the ``A + I`` construction of plain GCNs.
    Otherwise the self term keeps coefficient 1.
    """
    deg = np.asarray(graph.abs_degree, dtype=np.float64)
    if normalize_self_term:
        deg = deg + 1.0
    u, v, w = graph.u, graph.v, graph.w
    denom = np.sqrt(deg[u] * deg[v])
    # zero-weight edges on an otherwise isolated node give 0/0
    c = np.divide(w, denom, out=np.zeros_like(w), where=denom > 0)
    if normalize_self_term:
        self_coeff = 1.0 / deg
    else:
        self_coeff = np.ones(graph.node_count)
    return SignedMessageIndex(
        node_count=graph.node_count,
        src=np.concatenate([v, u]),
        dst=np.concatenate([u, v]),
        coeff=np.concatenate([c, c]),
        weight=np.concatenate([w, w]),
        self_coeff=self_coeff,
    )


def init_node_features(graph: WeightedGraph) -> np.ndarray:
    """Rows ``(sum of positive incident weights, sum of negative incident weights)``."""
    return np.column_stack([graph.pos_degree, graph.neg_degree]).astype(np.float64)


def concat_indexes(indexes: list[SignedMessageIndex]) -> SignedMessageIndex:
    offsets = np.cumsum([0] + [ix.node_count for ix in indexes])
    return SignedMessageIndex(
        node_count=int(offsets[-1]),
        src=np.concatenate([ix.src + o for ix, o in zip(indexes, offsets)]),
        dst=np.concatenate([ix.dst + o for ix, o in zip(indexes, offsets)]),
        coeff=np.concatenate([ix.coeff for ix in indexes]),
        weight=np.concatenate([ix.weight for ix in indexes]),
        self_coeff=np.concatenate([ix.self_coeff for ix in indexes]),
    )
