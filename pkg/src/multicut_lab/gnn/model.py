"""Edge-weighted message passing networks for multicut edge classification.

Two backbones are available:

``GCN_W``
    ``h_u' = act(BN(g(s_u h_u + sum_v L[v,u] h_v)))`` where ``L`` holds the
    signed normalized coefficients ``w_vu / sqrt(deg(u) deg(v))`` and
    ``s_u`` is 1 unless self-term normalization is enabled.
``GIN_W``
    ``h_u' = act(BN(MLP((1 + eps) h_u + sum_v w_vu h_v)))`` with a
    two-layer MLP and a learnable ``eps`` per layer.

Edges are classified from both concatenation orders ``[h_u; h_v]`` and
``[h_v; h_u]`` by the same MLP; the two outputs are averaged so the
result does not depend on edge orientation.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import ShapeMismatch
from ..nn import (
    BatchNorm,
    Linear,
    Tensor,
    add,
    constant,
    concat_cols,
    gather_rows,
    hadamard,
    parameter,
    relu,
    scale,
    scatter_add_rows,
    sigmoid,
)
from .message import SignedMessageIndex

BACKBONES = ("GCN_W", "GIN_W")
ACTIVATIONS = ("relu", "identity")
DIRECTION_MODES = ("prob", "logit")


@dataclass
class ModelConfig:
    backbone: str = "GCN_W"
    depth: int = 4
    width: int = 32
    batchnorm: bool = True
    activation: str = "relu"
    # True: linear -> BN -> act;  False: linear -> act -> BN
    bn_before_activation: bool = True
    classifier_hidden: list[int] = field(default_factory=list)
    normalize_self_term: bool = False
    direction_average: str = "prob"
    gin_learn_eps: bool = True
    in_features: int = 2

    def __post_init__(self):
        if self.backbone not in BACKBONES:
            raise ValueError(f"backbone must be one of {BACKBONES}, got {self.backbone!r}")
        if self.depth < 1 or self.width < 1:
            raise ValueError("depth and width must be positive")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}")
        if self.direction_average not in DIRECTION_MODES:
            raise ValueError(f"direction_average must be one of {DIRECTION_MODES}")
        if not self.classifier_hidden:
            self.classifier_hidden = [2 * self.width, 2 * self.width]
        self.classifier_hidden = [int(h) for h in self.classifier_hidden]

    def to_dict(self) -> dict:
        return asdict(self)


def _act(x: Tensor, kind: str) -> Tensor:
    return relu(x) if kind == "relu" else x


def gcn_w_aggregate(h: Tensor, index: SignedMessageIndex) -> Tensor:
    """``s_u h_u + sum_{v in N(u)} L[v,u] h_v`` for every node."""
    if h.rows != index.node_count:
        raise ShapeMismatch(f"gcn_w: {h.rows} feature rows for {index.node_count} nodes")
    msgs = hadamard(gather_rows(h, index.src), constant(index.coeff[:, None]))
    agg = scatter_add_rows(msgs, index.dst, index.node_count)
    if np.all(index.self_coeff == 1.0):
        return add(h, agg)
    return add(hadamard(h, constant(index.self_coeff[:, None])), agg)


def gin_w_aggregate(h: Tensor, index: SignedMessageIndex, eps: Tensor | float) -> Tensor:
    """``(1 + eps) h_u + sum_{v in N(u)} w_vu h_v``."""
    if h.rows != index.node_count:
        raise ShapeMismatch(f"gin_w: {h.rows} feature rows for {index.node_count} nodes")
    msgs = hadamard(gather_rows(h, index.src), constant(index.weight[:, None]))
    agg = scatter_add_rows(msgs, index.dst, index.node_count)
    if isinstance(eps, Tensor):
        self_term = add(h, hadamard(h, eps))
    else:
        self_term = scale(h, 1.0 + float(eps))
    return add(self_term, agg)


class _Layer:
    def _finish(self, z: Tensor, training: bool) -> Tensor:
        if self.bn is None:
            return _act(z, self.activation)
        if self.bn_first:
            return _act(self.bn(z, training), self.activation)
        return self.bn(_act(z, self.activation), training)


class GCNWLayer(_Layer):
    def __init__(self, fan_in, fan_out, rng, *, batchnorm=True, activation="relu",
                 bn_before_activation=True, name="layer"):
        self.linear = Linear(fan_in, fan_out, rng, f"{name}.linear")
        self.bn = BatchNorm(fan_out, f"{name}.bn") if batchnorm else None
        self.activation = activation
        self.bn_first = bn_before_activation

    def __call__(self, h: Tensor, index: SignedMessageIndex, training: bool = False) -> Tensor:
        return self._finish(self.linear(gcn_w_aggregate(h, index)), training)

    def parameters(self) -> list[Tensor]:
        ps = self.linear.parameters()
        return ps + (self.bn.parameters() if self.bn else [])

    def batchnorms(self) -> list[BatchNorm]:
        return [self.bn] if self.bn else []


class GINWLayer(_Layer):
    def __init__(self, fan_in, fan_out, rng, *, batchnorm=True, activation="relu",
                 bn_before_activation=True, learn_eps=True, name="layer"):
        self.eps = parameter([[0.0]], f"{name}.eps") if learn_eps else 0.0
        self.mlp_in = Linear(fan_in, fan_out, rng, f"{name}.mlp_in")
        self.mlp_bn = BatchNorm(fan_out, f"{name}.mlp_bn") if batchnorm else None
        self.mlp_out = Linear(fan_out, fan_out, rng, f"{name}.mlp_out")
        self.bn = BatchNorm(fan_out, f"{name}.bn") if batchnorm else None
        self.activation = activation
        self.bn_first = bn_before_activation

    def __call__(self, h: Tensor, index: SignedMessageIndex, training: bool = False) -> Tensor:
        z = self.mlp_in(gin_w_aggregate(h, index, self.eps))
        if self.mlp_bn is not None:
            z = self.mlp_bn(z, training)
        z = self.mlp_out(relu(z))
        return self._finish(z, training)

    def parameters(self) -> list[Tensor]:
        ps = [self.eps] if isinstance(self.eps, Tensor) else []
        ps += self.mlp_in.parameters()
        if self.mlp_bn:
            ps += self.mlp_bn.parameters()
        ps += self.mlp_out.parameters()
        return ps + (self.bn.parameters() if self.bn else [])

    def batchnorms(self) -> list[BatchNorm]:
        return [b for b in (self.mlp_bn, self.bn) if b is not None]


class EdgeClassifier:
    """MLP on concatenated endpoint embeddings, one logit per row."""

    def __init__(self, fan_in: int, hidden: list[int], rng):
        sizes = [fan_in] + list(hidden) + [1]
        self.layers = [Linear(a, b, rng, f"classifier.{i}") for i, (a, b) in enumerate(zip(sizes, sizes[1:]))]

    def logits(self, x: Tensor) -> Tensor:
        for i, lin in enumerate(self.layers):
            x = lin(x)
            if i < len(self.layers) - 1:
                x = relu(x)
        return x

    def parameters(self) -> list[Tensor]:
        return [p for lin in self.layers for p in lin.parameters()]


def edge_probabilities(h: Tensor, edge_u, edge_v, classifier: EdgeClassifier, mode: str = "prob") -> Tensor:
    """Cut likelihood per edge from both concatenation orders.

    ``mode="prob"`` averages the two sigmoids, ``mode="logit"`` applies
    the sigmoid to the averaged logits.
    """
    if classifier.layers[0].weight.rows != 2 * h.cols:
        raise ShapeMismatch(
            f"classifier expects {classifier.layers[0].weight.rows} inputs, embeddings give {2 * h.cols}"
        )
    hu = gather_rows(h, edge_u)
    hv = gather_rows(h, edge_v)
    a = classifier.logits(concat_cols(hu, hv))
    b = classifier.logits(concat_cols(hv, hu))
    if mode == "logit":
        return sigmoid(scale(add(a, b), 0.5))
    return scale(add(sigmoid(a), sigmoid(b)), 0.5)


class MulticutGNN:
    """Model parameters plus architecture metadata."""

    def __init__(self, config: ModelConfig, rng: np.random.Generator | int | None = None):
        if not isinstance(rng, np.random.Generator):
            rng = np.random.default_rng(rng)
        self.config = config
        c = config
        self.layers = []
        fan_in = c.in_features
        for t in range(c.depth):
            kw = dict(batchnorm=c.batchnorm, activation=c.activation,
                      bn_before_activation=c.bn_before_activation, name=f"layers.{t}")
            if c.backbone == "GCN_W":
                layer = GCNWLayer(fan_in, c.width, rng, **kw)
            else:
                layer = GINWLayer(fan_in, c.width, rng, learn_eps=c.gin_learn_eps, **kw)
            self.layers.append(layer)
            fan_in = c.width
        self.classifier = EdgeClassifier(2 * c.width, c.classifier_hidden, rng)

    def parameters(self) -> list[Tensor]:
        ps = [p for layer in self.layers for p in layer.parameters()]
        return ps + self.classifier.parameters()

    def batchnorms(self) -> list[BatchNorm]:
        return [bn for layer in self.layers for bn in layer.batchnorms()]

    def embed(self, features, index: SignedMessageIndex, training: bool = False) -> Tensor:
        h = constant(features)
        for layer in self.layers:
            h = layer(h, index, training)
        return h

    def forward(self, batch, training: bool = False) -> tuple[Tensor, Tensor]:
        """Node embeddings and edge cut probabilities for a :class:`GraphBatch`."""
        h = self.embed(batch.features, batch.index, training)
        p = edge_probabilities(h, batch.edge_u, batch.edge_v, self.classifier, self.config.direction_average)
        return h, p
