"""Minimal dense-tensor autograd: primitives, layers, BCE and Adam."""

from .layers import BatchNorm, Linear, batchnorm_forward, glorot_uniform
from .losses import bce_loss
from .optim import AdamState, adam_step
from .tensor import (
    Tape,
    Tensor,
    add,
    backpropagate,
    concat_cols,
    constant,
    gather_rows,
    hadamard,
    matmul,
    mean_rows,
    parameter,
    record,
    relu,
    scale,
    scatter_add_rows,
    sigmoid,
    sub,
    sum_rows,
    total,
)

__all__ = [
    "AdamState",
    "BatchNorm",
    "Linear",
    "Tape",
    "Tensor",
    "adam_step",
    "add",
    "backpropagate",
    "batchnorm_forward",
    "bce_loss",
    "concat_cols",
    "constant",
    "gather_rows",
    "glorot_uniform",
    "hadamard",
    "matmul",
    "mean_rows",
    "parameter",
    "record",
    "relu",
    "scale",
    "scatter_add_rows",
    "sigmoid",
    "sub",
    "sum_rows",
    "total",
]
