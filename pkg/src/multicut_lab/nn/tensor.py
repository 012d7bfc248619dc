"""Dense 2-D tensors with tape-based reverse-mode differentiation.

Operations record themselves on the innermost active :class:`Tape` when
at least one input requires a gradient.  Outside a tape nothing is
recorded, which is how inference runs.

>>> x = parameter([[3.0]])
>>> with Tape() as tape:
...     loss = x * x
>>> backpropagate(tape, loss)[x]
array([[6.]])
"""

from __future__ import annotations

import threading
from typing import Callable, Sequence

import numpy as np
from scipy.sparse import csr_matrix

from ..errors import NonScalarLoss, ShapeMismatch

__all__ = [
    "Tensor",
    "Tape",
    "parameter",
    "constant",
    "record",
    "backpropagate",
    "matmul",
    "add",
    "sub",
    "hadamard",
    "scale",
    "relu",
    "sigmoid",
    "concat_cols",
    "sum_rows",
    "mean_rows",
    "total",
    "gather_rows",
    "scatter_add_rows",
]

_local = threading.local()


def _tapes() -> list:
    if not hasattr(_local, "stack"):
        _local.stack = []
    return _local.stack


class Tape:
    """Ordered record of primitive applications; creation order is topological."""

    def __init__(self):
        self.records: list[Tensor] = []

    def __enter__(self) -> "Tape":
        _tapes().append(self)
        return self

    def __exit__(self, *exc):
        _tapes().pop()
        return False

    def __len__(self):
        return len(self.records)


class Tensor:
    __slots__ = ("value", "grad", "requires_grad", "parents", "backward_fn", "op", "name")

    def __init__(self, value, requires_grad: bool = False, name: str | None = None):
        value = np.asarray(value, dtype=np.float64)
        if value.ndim == 0:
            value = value.reshape(1, 1)
        elif value.ndim == 1:
            value = value.reshape(-1, 1)
        elif value.ndim != 2:
            raise ShapeMismatch(f"tensors are 2-D, got shape {value.shape}")
        self.value = value
        self.grad: np.ndarray | None = None
        self.requires_grad = requires_grad
        self.parents: tuple[Tensor, ...] = ()
        self.backward_fn: Callable | None = None
        self.op = "leaf"
        self.name = name

    @property
    def shape(self) -> tuple[int, int]:
        return self.value.shape

    @property
    def rows(self) -> int:
        return self.value.shape[0]

    @property
    def cols(self) -> int:
        return self.value.shape[1]

    def numpy(self) -> np.ndarray:
        return self.value

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"Tensor{tag}(shape={self.shape}, op={self.op})"

    def __add__(self, other):
        return add(self, _lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, _lift(other))

    def __rsub__(self, other):
        return sub(_lift(other), self)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return scale(self, other)
        return hadamard(self, _lift(other))

    __rmul__ = __mul__

    def __neg__(self):
        return scale(self, -1.0)

    def __matmul__(self, other):
        return matmul(self, other)


def parameter(value, name: str | None = None) -> Tensor:
    return Tensor(np.array(value, dtype=np.float64), requires_grad=True, name=name)


def constant(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


def _lift(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def record(value: np.ndarray, parents: Sequence[Tensor], backward: Callable, op: str) -> Tensor:
    """Wrap ``value`` as the output of a primitive.

    ``backward(grad_out)`` must return one gradient (or ``None``) per
    parent.  Custom fused operations use this directly.
    """
    out = Tensor(value)
    out.op = op
    if any(p.requires_grad for p in parents):
        out.requires_grad = True
        stack = _tapes()
        if stack:
            out.parents = tuple(parents)
            out.backward_fn = backward
            stack[-1].records.append(out)
    return out


def backpropagate(tape: Tape, loss: Tensor) -> dict[Tensor, np.ndarray]:
    """Reverse sweep over ``tape``; returns gradients of every leaf reached.

    Gradients are also stored on ``tensor.grad`` of those leaves.
    """
    if loss.shape != (1, 1):
        raise NonScalarLoss(f"loss must be 1x1, got {loss.shape}")
    grads: dict[int, np.ndarray] = {id(loss): np.ones((1, 1))}
    leaves: dict[int, Tensor] = {}
    if loss.backward_fn is None and loss.requires_grad:
        leaves[id(loss)] = loss
    for node in reversed(tape.records):
        g = grads.pop(id(node), None)
        if g is None:
            continue
        for p, gp in zip(node.parents, node.backward_fn(g)):
            if gp is None or not p.requires_grad:
                continue
            key = id(p)
            if key in grads:
                grads[key] = grads[key] + gp
            else:
                grads[key] = gp
            if p.backward_fn is None:
                leaves[key] = p
    out = {}
    for key, leaf in leaves.items():
        leaf.grad = grads.get(key, np.zeros_like(leaf.value))
        out[leaf] = leaf.grad
    return out


# ---------------------------------------------------------------- primitives


def _broadcast(op: str, a: Tensor, b: Tensor) -> None:
    ok = all(x == y or x == 1 or y == 1 for x, y in zip(a.shape, b.shape))
    if not ok:
        raise ShapeMismatch(f"{op}: incompatible shapes {a.shape} and {b.shape}")


def _unbroadcast(g: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    if g.shape == shape:
        return g
    if shape[0] == 1 and g.shape[0] != 1:
        g = g.sum(axis=0, keepdims=True)
    if shape[1] == 1 and g.shape[1] != 1:
        g = g.sum(axis=1, keepdims=True)
    return g


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.cols != b.rows:
        raise ShapeMismatch(f"matmul: incompatible shapes {a.shape} and {b.shape}")
    av, bv = a.value, b.value
    return record(av @ bv, (a, b), lambda g: (g @ bv.T, av.T @ g), "matmul")


def add(a: Tensor, b: Tensor) -> Tensor:
    _broadcast("add", a, b)
    sa, sb = a.shape, b.shape
    return record(a.value + b.value, (a, b),
                  lambda g: (_unbroadcast(g, sa), _unbroadcast(g, sb)), "add")


def sub(a: Tensor, b: Tensor) -> Tensor:
    _broadcast("sub", a, b)
    sa, sb = a.shape, b.shape
    return record(a.value - b.value, (a, b),
                  lambda g: (_unbroadcast(g, sa), -_unbroadcast(g, sb)), "sub")


def hadamard(a: Tensor, b: Tensor) -> Tensor:
    _broadcast("hadamard", a, b)
    av, bv = a.value, b.value
    return record(av * bv, (a, b),
                  lambda g: (_unbroadcast(g * bv, av.shape), _unbroadcast(g * av, bv.shape)),
                  "hadamard")


def scale(x: Tensor, c: float) -> Tensor:
    c = float(c)
    return record(x.value * c, (x,), lambda g: (g * c,), "scale")


def relu(x: Tensor) -> Tensor:
    mask = x.value > 0
    return record(np.where(mask, x.value, 0.0), (x,), lambda g: (g * mask,), "relu")


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def sigmoid(x: Tensor) -> Tensor:
    s = _sigmoid(x.value)
    return record(s, (x,), lambda g: (g * s * (1.0 - s),), "sigmoid")


def concat_cols(*xs: Tensor) -> Tensor:
    rows = {x.rows for x in xs}
    if len(rows) != 1:
        raise ShapeMismatch(f"concat_cols: row counts differ {[x.shape for x in xs]}")
    bounds = np.cumsum([0] + [x.cols for x in xs])

    def backward(g):
        return tuple(g[:, bounds[i]:bounds[i + 1]] for i in range(len(xs)))

    return record(np.concatenate([x.value for x in xs], axis=1), xs, backward, "concat_cols")


def sum_rows(x: Tensor) -> Tensor:
    """Column sums, shape ``(1, cols)``."""
    r = x.rows
    return record(x.value.sum(axis=0, keepdims=True), (x,),
                  lambda g: (np.repeat(g, r, axis=0),), "sum_rows")


def mean_rows(x: Tensor) -> Tensor:
    r = x.rows
    return record(x.value.mean(axis=0, keepdims=True), (x,),
                  lambda g: (np.repeat(g / r, r, axis=0),), "mean_rows")


def total(x: Tensor) -> Tensor:
    shape = x.shape
    return record(np.array([[x.value.sum()]]), (x,),
                  lambda g: (np.full(shape, g[0, 0]),), "total")


def gather_rows(x: Tensor, index) -> Tensor:
    idx = np.asarray(index, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= x.rows):
        raise ShapeMismatch(f"gather_rows: index out of range for {x.shape}")
    rows = x.rows
    return record(x.value[idx], (x,), lambda g: (_scatter(idx, g, rows),), "gather_rows")


def scatter_add_rows(x: Tensor, index, rows: int) -> Tensor:
    """``out[index[i]] += x[i]`` into a ``(rows, x.cols)`` zero tensor."""
    idx = np.asarray(index, dtype=np.int64)
    if len(idx) != x.rows:
        raise ShapeMismatch(f"scatter_add_rows: {len(idx)} indexes for {x.shape}")
    return record(_scatter(idx, x.value, rows), (x,), lambda g: (g[idx],), "scatter_add_rows")


def _scatter(idx: np.ndarray, values: np.ndarray, rows: int) -> np.ndarray:
    # one-hot sparse product; much faster than np.add.at for wide rows
    onehot = csr_matrix((np.ones(len(idx)), (idx, np.arange(len(idx)))), shape=(rows, len(idx)))
    return np.asarray(onehot @ values)
