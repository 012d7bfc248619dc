from __future__ import annotations

import numpy as np

from ..errors import LengthMismatch
from .tensor import Tensor, record

PROB_CLAMP = 1e-7


def bce_loss(pred: Tensor, target) -> Tensor:
    """Mean binary cross entropy between probabilities ``pred`` and 0/1 ``target``.

    Probabilities are clamped to ``[1e-7, 1 - 1e-7]``; clamped entries get
    zero gradient.
    """
    t = np.asarray(target, dtype=np.float64).reshape(-1, 1)
    if pred.shape != t.shape:
        raise LengthMismatch(f"bce: predictions {pred.shape} vs targets {t.shape}")
    p_raw = pred.value
    p = np.clip(p_raw, PROB_CLAMP, 1.0 - PROB_CLAMP)
    inside = (p_raw >= PROB_CLAMP) & (p_raw <= 1.0 - PROB_CLAMP)
    n = len(t)
    value = -(t * np.log(p) + (1.0 - t) * np.log1p(-p)).sum() / n

    def backward(g):
        return (g[0, 0] * inside * (-t / p + (1.0 - t) / (1.0 - p)) / n,)

    return record(np.array([[value]]), (pred,), backward, "bce")
