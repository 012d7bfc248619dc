from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..cycles import ChordlessCycleSet
from ..graph import WeightedGraph
from .message import SignedMessageIndex, concat_indexes, init_node_features, signed_message_index


@dataclass
class GraphBatch:
    """Several graphs laid out as one block-diagonal graph.

    Node and edge ids of graph ``i`` are shifted by ``node_offsets[i]`` and
    ``edge_offsets[i]``; there are no edges between graphs, so message
    passing stays per graph while batch-norm statistics span the batch.
    """

    graphs: list[WeightedGraph]
    index: SignedMessageIndex
    features: np.ndarray
    edge_u: np.ndarray
    edge_v: np.ndarray
    node_offsets: np.ndarray
    edge_offsets: np.ndarray
    cycles: dict[int, np.ndarray]
    labels: np.ndarray | None = None

    @property
    def num_graphs(self) -> int:
        return len(self.graphs)

    def edge_slice(self, i: int) -> slice:
        return slice(int(self.edge_offsets[i]), int(self.edge_offsets[i + 1]))

    def node_slice(self, i: int) -> slice:
        return slice(int(self.node_offsets[i]), int(self.node_offsets[i + 1]))


def make_batch(
    graphs: list[WeightedGraph],
    cycle_sets: list[ChordlessCycleSet] | None = None,
    labels: list[np.ndarray] | None = None,
    normalize_self_term: bool = False,
    indexes: list[SignedMessageIndex] | None = None,
) -> GraphBatch:
    node_offsets = np.cumsum([0] + [g.node_count for g in graphs])
    edge_offsets = np.cumsum([0] + [g.edge_count for g in graphs])
    if indexes is None:
        indexes = [signed_message_index(g, normalize_self_term) for g in graphs]
    cycles: dict[int, list] = {}
    if cycle_sets is not None:
        for cs, eo in zip(cycle_sets, edge_offsets):
            for L, idx in cs.offset(int(eo)).items():
                cycles.setdefault(L, []).append(idx)
    return GraphBatch(
        graphs=list(graphs),
        index=concat_indexes(indexes) if len(indexes) > 1 else indexes[0],
        features=np.concatenate([init_node_features(g) for g in graphs]),
        edge_u=np.concatenate([g.u + o for g, o in zip(graphs, node_offsets)]),
        edge_v=np.concatenate([g.v + o for g, o in zip(graphs, node_offsets)]),
        node_offsets=node_offsets,
        edge_offsets=edge_offsets,
        cycles={L: np.concatenate(v) for L, v in sorted(cycles.items())},
        labels=None if labels is None else np.concatenate(labels).astype(np.float64),
    )
