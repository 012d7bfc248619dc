from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..cycles import count_cycle_violations, enumerate_chordless_cycles
from ..graph import WeightedGraph, connected_components, is_feasible, multicut_cost
from .batch import make_batch
from .model import MulticutGNN

THRESHOLD = 0.5


def threshold(probs) -> np.ndarray:
    return (np.asarray(probs).reshape(-1) >= THRESHOLD).astype(np.int8)


def round_to_feasible(graph: WeightedGraph, probs) -> np.ndarray:
    """Cut edges with ``p >= 0.5``, then keep every cut edge whose endpoints
    are still connected through kept edges."""
    y = threshold(probs)
    comp = connected_components(graph, y).component_id
    same = comp[graph.u] == comp[graph.v]
    y[same] = 0
    return y


@dataclass
class Prediction:
    labeling: np.ndarray
    objective: float
    probs: np.ndarray
    feasible_before_rounding: bool
    node_embeddings: np.ndarray
    violations: int | None = None
    forward_time: float = 0.0
    rounding_time: float = 0.0


def predict(model: MulticutGNN, graph: WeightedGraph, l: int | None = None) -> Prediction:
    """Single forward pass in inference mode, then rounding.

    With ``l`` the result also counts chordless cycles of length <= ``l``
    cut exactly once by the thresholded output.
    """
    t0 = time.perf_counter()
    batch = make_batch([graph], normalize_self_term=model.config.normalize_self_term)
    h, p = model.forward(batch, training=False)
    probs = p.value[:, 0].copy()
    t1 = time.perf_counter()
    raw = threshold(probs)
    feasible = is_feasible(graph, raw)
    y = raw if feasible else round_to_feasible(graph, probs)
    t2 = time.perf_counter()
    violations = None
    if l is not None:
        violations = count_cycle_violations(graph, raw, enumerate_chordless_cycles(graph, l))
    return Prediction(
        labeling=y,
        objective=multicut_cost(graph, y),
        probs=probs,
        feasible_before_rounding=feasible,
        node_embeddings=h.value.copy(),
        violations=violations,
        forward_time=t1 - t0,
        rounding_time=t2 - t1,
    )
