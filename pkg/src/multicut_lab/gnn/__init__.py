"""Learned multicut solver: signed message passing, CCL, rounding, training."""

from .batch import GraphBatch, make_batch
from .checkpoint import checkpoint_dict, load_checkpoint, model_from_dict, save_checkpoint
from .inference import Prediction, predict, round_to_feasible, threshold
from .loss import ccl_loss
from .message import SignedMessageIndex, concat_indexes, init_node_features, signed_message_index
from .model import (
    EdgeClassifier,
    GCNWLayer,
    GINWLayer,
    ModelConfig,
    MulticutGNN,
    edge_probabilities,
    gcn_w_aggregate,
    gin_w_aggregate,
)
from .train import (
    CURVE_COLUMNS,
    EvalSummary,
    TrainConfig,
    alpha_at,
    evaluate_model,
    train,
    write_curves_csv,
    write_embeddings_csv,
)

__all__ = [
    "CURVE_COLUMNS",
    "EdgeClassifier",
    "EvalSummary",
    "GCNWLayer",
    "GINWLayer",
    "GraphBatch",
    "ModelConfig",
    "MulticutGNN",
    "Prediction",
    "SignedMessageIndex",
    "TrainConfig",
    "alpha_at",
    "ccl_loss",
    "checkpoint_dict",
    "concat_indexes",
    "edge_probabilities",
    "evaluate_model",
    "gcn_w_aggregate",
    "gin_w_aggregate",
    "init_node_features",
    "load_checkpoint",
    "make_batch",
    "model_from_dict",
    "predict",
    "round_to_feasible",
    "save_checkpoint",
    "signed_message_index",
    "threshold",
    "train",
    "write_curves_csv",
    "write_embeddings_csv",
]
