"""Supervised training with BCE plus the cycle consistency loss.

The CCL weight follows an instance-count schedule: zero for the first
``warmup_instances`` training instances, then a linear ramp over
``ramp_instances`` up to ``alpha``, then constant.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

from ..cycles import enumerate_chordless_cycles
from ..errors import BadConfig, EmptyDataset, MissingLabels
from ..graph import is_feasible, multicut_cost, optimal_objective_ratio
from ..nn import AdamState, Tape, adam_step, add, backpropagate, bce_loss, scale
from .batch import GraphBatch, make_batch
from .inference import round_to_feasible, threshold
from .loss import ccl_loss
from .message import signed_message_index
from .model import ModelConfig, MulticutGNN

CURVE_COLUMNS = ("step", "instances", "alpha", "bce", "ccl", "feasible_ratio", "optimal_ratio", "mean_ratio")

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "train_dataset": {"type": ["string", "null"]},
        "eval_dataset": {"type": ["string", "null"]},
        "model": {"type": "object"},
        "epochs": {"type": "integer", "minimum": 1},
        "max_instances": {"type": ["integer", "null"], "minimum": 1},
        "batch_size": {"type": "integer", "minimum": 1},
        "alpha": {"type": "number", "minimum": 0},
        "warmup_instances": {"type": "integer", "minimum": 0},
        "ramp_instances": {"type": "integer", "minimum": 0},
        "max_cycle_length": {"type": "integer", "minimum": 3},
        "ccl_gate": {"type": "number", "minimum": 0, "maximum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "lr": {"type": "number", "exclusiveMinimum": 0},
        "weight_decay": {"type": "number", "minimum": 0},
        "beta1": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
        "beta2": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
        "adam_eps": {"type": "number", "exclusiveMinimum": 0},
        "eval_every": {"type": "integer", "minimum": 0},
        "eval_batch": {"type": "integer", "minimum": 1},
    },
}


@dataclass
class TrainConfig:
    train_dataset: str | None = None
    eval_dataset: str | None = None
    model: dict = field(default_factory=dict)
    epochs: int = 10
    # optional cap on training instances consumed (counts repeats across epochs)
    max_instances: int | None = None
    batch_size: int = 200
    alpha: float = 0.0
    warmup_instances: int = 0
    ramp_instances: int = 0
    max_cycle_length: int = 5
    ccl_gate: float = 0.5
    seed: int = 0
    lr: float = 1e-3
    weight_decay: float = 5e-4
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    # evaluate every N optimizer steps (0: only at the end)
    eval_every: int = 0
    eval_batch: int = 256

    @classmethod
    def from_dict(cls, doc: dict) -> "TrainConfig":
        try:
            jsonschema.validate(doc, CONFIG_SCHEMA)
        except jsonschema.ValidationError as exc:
            where = "/".join(map(str, exc.absolute_path)) or "<root>"
            raise BadConfig(f"{where}: {exc.message}") from None
        cfg = cls(**doc)
        try:
            cfg.model_config()
        except (TypeError, ValueError) as exc:
            raise BadConfig(f"model: {exc}") from None
        return cfg

    @classmethod
    def load(cls, path) -> "TrainConfig":
        try:
            doc = json.loads(Path(path).read_text())
        except OSError as exc:
            raise BadConfig(f"{path}: {exc.strerror or exc}") from None
        except json.JSONDecodeError as exc:
            raise BadConfig(f"{path}: not JSON ({exc.msg} at line {exc.lineno})") from None
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        return asdict(self)

    def model_config(self) -> ModelConfig:
        return ModelConfig(**self.model)

    def adam_state(self) -> AdamState:
        return AdamState(learning_rate=self.lr, weight_decay=self.weight_decay, beta1=self.beta1,
                         beta2=self.beta2, epsilon=self.adam_eps)


def alpha_at(instances_seen: int, cfg: TrainConfig) -> float:
    if instances_seen < cfg.warmup_instances:
        return 0.0
    if cfg.ramp_instances == 0:
        return cfg.alpha
    frac = (instances_seen - cfg.warmup_instances) / cfg.ramp_instances
    return cfg.alpha * min(1.0, frac)


@dataclass
class _Prepared:
    instance: object
    index: object
    cycles: object


def _prepare(instances, cfg: TrainConfig, model_cfg: ModelConfig, need_cycles: bool) -> list[_Prepared]:
    out = []
    for inst in instances:
        g = inst.graph
        cs = enumerate_chordless_cycles(g, cfg.max_cycle_length) if need_cycles else None
        out.append(_Prepared(inst, signed_message_index(g, model_cfg.normalize_self_term), cs))
    return out


def _batch(items: list[_Prepared], with_labels: bool) -> GraphBatch:
    return make_batch(
        [it.instance.graph for it in items],
        cycle_sets=[it.cycles for it in items] if items[0].cycles is not None else None,
        labels=[it.instance.optimal_labeling for it in items] if with_labels else None,
        indexes=[it.index for it in items],
    )


@dataclass
class EvalSummary:
    count: int
    feasible_ratio: float
    optimal_ratio: float | None
    mean_ratio: float | None
    ratios: list = field(default_factory=list)


def evaluate_model(model: MulticutGNN, instances, batch_size: int = 256, prepared=None) -> EvalSummary:
    """Batched inference-mode evaluation against stored optimal costs."""
    if prepared is None:
        prepared = [_Prepared(inst, signed_message_index(inst.graph, model.config.normalize_self_term), None)
                    for inst in instances]
    if not prepared:
        raise EmptyDataset("no evaluation instances")
    feasible, optimal, ratios = 0, 0, []
    for lo in range(0, len(prepared), batch_size):
        chunk = prepared[lo:lo + batch_size]
        batch = _batch(chunk, with_labels=False)
        _, p = model.forward(batch, training=False)
        probs = p.value[:, 0]
        for i, it in enumerate(chunk):
            g = it.instance.graph
            pi = probs[batch.edge_slice(i)]
            raw = threshold(pi)
            ok = is_feasible(g, raw)
            feasible += ok
            y = raw if ok else round_to_feasible(g, pi)
            opt = it.instance.optimal_cost
            if opt is not None:
                cost = multicut_cost(g, y)
                ratios.append(optimal_objective_ratio(cost, opt))
                optimal += abs(cost - opt) <= 1e-9 * max(1.0, abs(opt))
    n = len(prepared)
    labeled = len(ratios)
    return EvalSummary(
        count=n,
        feasible_ratio=feasible / n,
        optimal_ratio=optimal / labeled if labeled else None,
        mean_ratio=float(np.mean(ratios)) if labeled else None,
        ratios=ratios,
    )


def train(cfg: TrainConfig, train_instances=None, eval_instances=None,
          log=None) -> tuple[MulticutGNN, list[dict]]:
    """Train a model; returns it with one curve row per evaluation point.

    Instances default to the datasets named in ``cfg``.  ``log`` is an
    optional callable receiving each curve row.
    """
    from ..datasets import read_dataset

    if train_instances is None:
        if not cfg.train_dataset:
            raise EmptyDataset("no training instances and no train_dataset path")
        train_instances = read_dataset(cfg.train_dataset)[0]
    if eval_instances is None and cfg.eval_dataset:
        eval_instances = read_dataset(cfg.eval_dataset)[0]
    train_instances = list(train_instances)
    if not train_instances:
        raise EmptyDataset("training set is empty")
    missing = [i for i, inst in enumerate(train_instances) if inst.optimal_labeling is None]
    if missing:
        raise MissingLabels(f"{len(missing)} training instances lack labels (first: #{missing[0]})")

    model_cfg = cfg.model_config()
    rng = np.random.default_rng(cfg.seed)
    model = MulticutGNN(model_cfg, rng)
    params = model.parameters()
    state = cfg.adam_state()
    need_cycles = cfg.alpha > 0
    prepared = _prepare(train_instances, cfg, model_cfg, need_cycles)
    eval_prepared = None
    if eval_instances:
        eval_prepared = [_Prepared(inst, signed_message_index(inst.graph, model_cfg.normalize_self_term), None)
                         for inst in eval_instances]

    curves: list[dict] = []
    seen = 0
    step = 0
    window_bce: list[float] = []
    window_ccl: list[float] = []
    budget = cfg.max_instances

    def checkpoint_row(alpha):
        row = {"step": step, "instances": seen, "alpha": alpha,
               "bce": float(np.mean(window_bce)) if window_bce else None,
               "ccl": float(np.mean(window_ccl)) if window_ccl else None,
               "feasible_ratio": None, "optimal_ratio": None, "mean_ratio": None}
        if eval_prepared:
            s = evaluate_model(model, None, cfg.eval_batch, eval_prepared)
            row.update(feasible_ratio=s.feasible_ratio, optimal_ratio=s.optimal_ratio, mean_ratio=s.mean_ratio)
        window_bce.clear()
        window_ccl.clear()
        curves.append(row)
        if log is not None:
            log(row)

    alpha = alpha_at(0, cfg)
    done = False
    for _ in range(cfg.epochs):
        order = rng.permutation(len(prepared))
        for lo in range(0, len(order), cfg.batch_size):
            picks = order[lo:lo + cfg.batch_size]
            if budget is not None:
                picks = picks[:budget - seen]
            if len(picks) == 0:
                done = True
                break
            items = [prepared[i] for i in picks]
            batch = _batch(items, with_labels=True)
            alpha = alpha_at(seen, cfg)
            with Tape() as tape:
                _, p = model.forward(batch, training=True)
                bce = bce_loss(p, batch.labels)
                loss = bce
                ccl_value = 0.0
                if need_cycles and batch.cycles:
                    ccl = ccl_loss(p, batch.cycles, 1.0, cfg.ccl_gate, normalizer=batch.num_graphs)
                    ccl_value = float(ccl.value[0, 0])
                    if alpha > 0:
                        loss = add(bce, scale(ccl, alpha))
            grads = backpropagate(tape, loss)
            adam_step(params, [grads.get(q, np.zeros_like(q.value)) for q in params], state)
            seen += len(picks)
            step += 1
            window_bce.append(float(bce.value[0, 0]))
            window_ccl.append(ccl_value)
            if cfg.eval_every and step % cfg.eval_every == 0:
                checkpoint_row(alpha)
            if budget is not None and seen >= budget:
                done = True
                break
        if done:
            break
    if not curves or curves[-1]["step"] != step:
        checkpoint_row(alpha)
    return model, curves


def _cell(v):
    if v is None:
        return ""
    return repr(float(v)) if isinstance(v, float) else str(v)


def write_curves_csv(curves: list[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CURVE_COLUMNS)
        for row in curves:
            w.writerow([_cell(row[c]) for c in CURVE_COLUMNS])


def write_embeddings_csv(embeddings: np.ndarray, path) -> None:
    h = np.asarray(embeddings)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["node_id"] + [f"h{j}" for j in range(h.shape[1])])
        for i, row in enumerate(h.tolist()):
            w.writerow([i] + [repr(x) for x in row])


__all__ = [
    "CONFIG_SCHEMA",
    "CURVE_COLUMNS",
    "EvalSummary",
    "TrainConfig",
    "alpha_at",
    "evaluate_model",
    "train",
    "write_curves_csv",
    "write_embeddings_csv",
]
