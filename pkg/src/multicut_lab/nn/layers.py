from __future__ import annotations

import numpy as np

from ..errors import DegenerateBatch, ShapeMismatch
from .tensor import Tensor, add, matmul, parameter, record

BN_EPS = 1e-5
BN_MOMENTUM = 0.1


def glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


class Linear:
    def __init__(self, fan_in: int, fan_out: int, rng: np.random.Generator, name: str = "linear"):
        self.weight = parameter(glorot_uniform(rng, fan_in, fan_out), f"{name}.weight")
        self.bias = parameter(np.zeros((1, fan_out)), f"{name}.bias")

    def __call__(self, x: Tensor) -> Tensor:
        if x.cols != self.weight.rows:
            raise ShapeMismatch(f"linear: input {x.shape} vs weight {self.weight.shape}")
        return add(matmul(x, self.weight), self.bias)

    def parameters(self) -> list[Tensor]:
        return [self.weight, self.bias]


class BatchNorm:
    """Per-feature batch normalization with running statistics."""

    def __init__(self, features: int, name: str = "bn", eps: float = BN_EPS, momentum: float = BN_MOMENTUM):
        self.scale = parameter(np.ones((1, features)), f"{name}.scale")
        self.shift = parameter(np.zeros((1, features)), f"{name}.shift")
        self.running_mean = np.zeros((1, features))
        self.running_var = np.ones((1, features))
        self.eps = eps
        self.momentum = momentum

    def __call__(self, x: Tensor, training: bool) -> Tensor:
        return batchnorm_forward(x, self, training)

    def parameters(self) -> list[Tensor]:
        return [self.scale, self.shift]


def batchnorm_forward(x: Tensor, bn: BatchNorm, training: bool) -> Tensor:
    """Normalize columns of ``x`` (rows are items).

    Training mode uses the batch statistics and updates the running ones
    in place; inference mode is a fixed affine map from the running ones.
    """
    if x.cols != bn.scale.cols:
        raise ShapeMismatch(f"batchnorm: input {x.shape} vs {bn.scale.cols} features")
    gamma, beta = bn.scale, bn.shift
    if training:
        n = x.rows
        if n < 2:
            raise DegenerateBatch(f"batchnorm needs at least 2 rows in training mode, got {n}")
        mean = x.value.mean(axis=0, keepdims=True)
        centered = x.value - mean
        var = (centered ** 2).mean(axis=0, keepdims=True)
        inv_std = 1.0 / np.sqrt(var + bn.eps)
        xhat = centered * inv_std
        bn.running_mean = (1 - bn.momentum) * bn.running_mean + bn.momentum * mean
        bn.running_var = (1 - bn.momentum) * bn.running_var + bn.momentum * var * n / (n - 1)
        gv = gamma.value

        def backward(g):
            dxhat = g * gv
            dx = inv_std * (dxhat - dxhat.mean(axis=0, keepdims=True)
                            - xhat * (dxhat * xhat).mean(axis=0, keepdims=True))
            return (dx, (g * xhat).sum(axis=0, keepdims=True), g.sum(axis=0, keepdims=True))
    else:
        inv_std = 1.0 / np.sqrt(bn.running_var + bn.eps)
        xhat = (x.value - bn.running_mean) * inv_std
        gv = gamma.value

        def backward(g):
            return (g * gv * inv_std, (g * xhat).sum(axis=0, keepdims=True),
                    g.sum(axis=0, keepdims=True))

    return record(xhat * gamma.value + beta.value, (x, gamma, beta), backward, "batchnorm")
