from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ShapeMismatch
from .tensor import Tensor


@dataclass
class AdamState:
    learning_rate: float = 1e-3
    weight_decay: float = 5e-4
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    step: int = 0
    first: dict = field(default_factory=dict)
    second: dict = field(default_factory=dict)


def adam_step(params: list[Tensor], grads, state: AdamState) -> None:
    """One Adam update in place.

    Weight decay is classic L2: ``weight_decay * theta`` is added to the
    gradient before the moment updates.  ``grads`` is a mapping from
    parameter to gradient or a sequence aligned with ``params``; a
    parameter without gradient is treated as having zero gradient.
    """
    if not isinstance(grads, dict):
        grads = dict(zip(params, grads))
    state.step += 1
    t = state.step
    b1, b2 = state.beta1, state.beta2
    c1 = 1.0 - b1 ** t
    c2 = 1.0 - b2 ** t
    for i, p in enumerate(params):
        g = grads.get(p)
        if g is None:
            g = np.zeros_like(p.value)
        elif g.shape != p.shape:
            raise ShapeMismatch(f"adam: gradient {g.shape} for parameter {p.shape}")
        g = g + state.weight_decay * p.value
        m = state.first.get(i)
        v = state.second.get(i)
        if m is None:
            m = np.zeros_like(p.value)
            v = np.zeros_like(p.value)
        m = b1 * m + (1.0 - b1) * g
        v = b2 * v + (1.0 - b2) * g * g
        state.first[i] = m
        state.second[i] = v
        p.value = p.value - state.learning_rate * (m / c1) / (np.sqrt(v / c2) + state.epsilon)
