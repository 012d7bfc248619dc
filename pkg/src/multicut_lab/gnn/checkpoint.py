"""Model checkpoints as JSON.

Layout (version 1)::

    {
      "format": "multicut-lab-checkpoint",
      "version": 1,
      "architecture": {...ModelConfig fields...},
      "parameters": [{"name": str, "shape": [r, c], "values": [floats, row-major]}, ...],
      "buffers": [{"name": str, "running_mean": [...], "running_var": [...]}, ...]
    }

Parameters appear in the model's declared order; floats are written with
``repr`` precision so loading reproduces the exact bits.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import BadCheckpoint
from .model import ModelConfig, MulticutGNN

FORMAT = "multicut-lab-checkpoint"
VERSION = 1


def checkpoint_dict(model: MulticutGNN) -> dict:
    return {
        "format": FORMAT,
        "version": VERSION,
        "architecture": model.config.to_dict(),
        "parameters": [
            {"name": p.name, "shape": list(p.shape), "values": p.value.ravel().tolist()}
            for p in model.parameters()
        ],
        "buffers": [
            {"name": bn.scale.name.rsplit(".", 1)[0],
             "running_mean": bn.running_mean.ravel().tolist(),
             "running_var": bn.running_var.ravel().tolist()}
            for bn in model.batchnorms()
        ],
    }


def model_from_dict(doc: dict) -> MulticutGNN:
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise BadCheckpoint("not a multicut-lab checkpoint")
    if doc.get("version") != VERSION:
        raise BadCheckpoint(f"unsupported checkpoint version {doc.get('version')!r}")
    try:
        config = ModelConfig(**doc["architecture"])
    except (TypeError, ValueError, KeyError) as exc:
        raise BadCheckpoint(f"bad architecture block: {exc}") from None
    model = MulticutGNN(config, rng=0)
    params = model.parameters()
    stored = doc.get("parameters", [])
    if len(stored) != len(params):
        raise BadCheckpoint(f"expected {len(params)} parameter arrays, found {len(stored)}")
    for p, entry in zip(params, stored):
        if entry.get("name") != p.name or tuple(entry.get("shape", ())) != p.shape:
            raise BadCheckpoint(
                f"parameter mismatch: expected {p.name} {p.shape}, "
                f"found {entry.get('name')} {entry.get('shape')}"
            )
        values = np.asarray(entry["values"], dtype=np.float64)
        if values.size != p.value.size or not np.all(np.isfinite(values)):
            raise BadCheckpoint(f"{p.name}: bad value array")
        p.value[...] = values.reshape(p.shape)
    bns = model.batchnorms()
    buffers = doc.get("buffers", [])
    if len(buffers) != len(bns):
        raise BadCheckpoint(f"expected {len(bns)} batch-norm buffers, found {len(buffers)}")
    for bn, entry in zip(bns, buffers):
        mean = np.asarray(entry.get("running_mean", []), dtype=np.float64)
        var = np.asarray(entry.get("running_var", []), dtype=np.float64)
        if mean.size != bn.running_mean.size or var.size != bn.running_var.size:
            raise BadCheckpoint(f"{entry.get('name')}: bad running statistics")
        bn.running_mean = mean.reshape(bn.running_mean.shape)
        bn.running_var = var.reshape(bn.running_var.shape)
    return model


def save_checkpoint(model: MulticutGNN, path) -> None:
    Path(path).write_text(json.dumps(checkpoint_dict(model)))


def load_checkpoint(path) -> MulticutGNN:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise BadCheckpoint(f"{path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise BadCheckpoint(f"{path}: not JSON ({exc.msg} at line {exc.lineno})") from None
    return model_from_dict(doc)
