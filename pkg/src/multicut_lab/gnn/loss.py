"""Cycle consistency loss.

For each chordless cycle ``C`` and each edge ``e`` on it with
``p_e >= gate`` the loss charges ``p_e * prod_{e' in C, e' != e} (1 - p_e')``,
i.e. the soft indicator that ``e`` is the only cut edge of ``C``.  The
gate is a mask recomputed on every call and carries no gradient.
"""

from __future__ import annotations

import numpy as np

from ..cycles import ChordlessCycleSet
from ..errors import LengthMismatch
from ..nn import Tensor, record


def _exclusive_products(q: np.ndarray) -> np.ndarray:
    """``out[:, j] = prod_{i != j} q[:, i]`` without division."""
    k, L = q.shape
    prefix = np.ones((k, L))
    suffix = np.ones((k, L))
    for j in range(1, L):
        prefix[:, j] = prefix[:, j - 1] * q[:, j - 1]
        suffix[:, L - 1 - j] = suffix[:, L - j] * q[:, L - j]
    return prefix * suffix


def _cycle_groups(cycles) -> dict[int, np.ndarray]:
    if isinstance(cycles, ChordlessCycleSet):
        return cycles.by_length()
    return cycles


def ccl_loss(probs: Tensor, cycles, alpha: float, gate: float = 0.5, normalizer: float = 1.0) -> Tensor:
    """``alpha / normalizer`` times the gated cycle penalty summed over cycles.

    ``cycles`` is a :class:`ChordlessCycleSet` or a ``{length: (k, length)
    edge-index array}`` mapping (as stored on a batch).
    """
    groups = _cycle_groups(cycles)
    p = probs.value[:, 0] if probs.cols == 1 else None
    if p is None:
        raise LengthMismatch(f"ccl: probabilities must be a column, got {probs.shape}")
    m = len(p)
    for idx in groups.values():
        if idx.size and idx.max() >= m:
            raise LengthMismatch(f"ccl: cycle references edge {idx.max()} but only {m} probabilities")
    factor = float(alpha) / float(normalizer)
    value = 0.0
    saved = []
    for idx in groups.values():
        P = p[idx]
        Q = 1.0 - P
        mask = P >= gate
        excl = _exclusive_products(Q)
        value += float(np.sum(mask * P * excl))
        saved.append((idx, P, Q, mask, excl))

    def backward(g):
        grad = np.zeros(m)
        for idx, P, Q, mask, excl in saved:
            L = idx.shape[1]
            gP = mask * excl
            weighted = mask * P
            for j in range(L):
                # d/dP_j of the terms owned by the other positions i != j
                Qj = Q.copy()
                Qj[:, j] = 1.0
                excl_j = _exclusive_products(Qj)
                others = np.delete(np.arange(L), j)
                gP[:, j] -= np.sum(weighted[:, others] * excl_j[:, others], axis=1)
            np.add.at(grad, idx.ravel(), gP.ravel())
        return ((g[0, 0] * factor * grad)[:, None],)

    return record(np.array([[factor * value]]), (probs,), backward, "ccl")
