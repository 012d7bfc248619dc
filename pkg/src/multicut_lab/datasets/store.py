"""Labeled instances and the on-disk dataset layout.

A dataset directory holds ``000000.mcg``, ``000001.mcg``, ... with an
optional ``.sol`` next to each graph, plus ``manifest.json``::

    {
      "format": "multicut-lab-dataset",
      "version": 1,
      "spec": {...DatasetSpec fields...} | null,
      "label_source": "Exact" | "GAEC" | "None",
      "count": int,
      "notes": {...generator notes...},
      "stats": {"nodes": [mean, std], "edges": [mean, std],
                "min_weight": [mean, std], "avg_weight": [mean, std],
                "max_weight": [mean, std], "optimal_cost": [mean, std] | null}
    }

The manifest is written with sorted keys and no timestamps, so equal
inputs give byte-identical directories.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import EmptyDataset, FormatError, TooLarge
from ..formats import read_mcg, read_sol, write_mcg, write_sol
from ..graph import WeightedGraph, is_feasible, multicut_cost
from ..solvers import exact_partition_solver, gaec
from .generators import DatasetSpec, generate_graphs

FORMAT = "multicut-lab-dataset"
VERSION = 1


@dataclass
class LabeledInstance:
    graph: WeightedGraph
    optimal_labeling: np.ndarray | None = None
    optimal_cost: float | None = None
    label_source: str = "None"

    @property
    def labeled(self) -> bool:
        return self.optimal_labeling is not None


def label_instances(graphs, label_mode: str = "Exact", cap: int = 11) -> list[LabeledInstance]:
    """Attach supervision.  ``GAEC`` labels are heuristic, not optimal."""
    graphs = [g.graph if isinstance(g, LabeledInstance) else g for g in graphs]
    if label_mode == "None":
        return [LabeledInstance(g) for g in graphs]
    if label_mode == "Exact":
        for g in graphs:
            if g.node_count > cap:
                raise TooLarge(g.node_count, cap)
        solve = lambda g: exact_partition_solver(g, cap=cap)  # noqa: E731
    elif label_mode == "GAEC":
        solve = gaec
    else:
        raise ValueError(f"unknown label mode {label_mode!r}")
    out = []
    for g in graphs:
        r = solve(g)
        out.append(LabeledInstance(g, r.labeling, r.objective, label_mode))
    return out


def generate_dataset(spec: DatasetSpec) -> tuple[list[LabeledInstance], dict]:
    graphs, notes = generate_graphs(spec)
    return label_instances(graphs, spec.label_mode, spec.exact_cap), notes


def _mean_std(values) -> list[float]:
    a = np.asarray(values, dtype=np.float64)
    return [float(a.mean()), float(a.std())]


def dataset_stats(instances: list[LabeledInstance]) -> dict:
    gs = [inst.graph for inst in instances]
    costs = [inst.optimal_cost for inst in instances if inst.optimal_cost is not None]
    return {
        "nodes": _mean_std([g.node_count for g in gs]),
        "edges": _mean_std([g.edge_count for g in gs]),
        "min_weight": _mean_std([g.w.min() for g in gs]),
        "avg_weight": _mean_std([g.w.mean() for g in gs]),
        "max_weight": _mean_std([g.w.max() for g in gs]),
        "optimal_cost": _mean_std(costs) if costs else None,
    }


def write_dataset(path, instances: list[LabeledInstance], spec: DatasetSpec | None = None,
                  notes: dict | None = None) -> dict:
    if not instances:
        raise EmptyDataset("refusing to write an empty dataset")
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    sources = {inst.label_source for inst in instances}
    for i, inst in enumerate(instances):
        write_mcg(inst.graph, root / f"{i:06d}.mcg")
        if inst.labeled:
            write_sol(inst.optimal_labeling, inst.optimal_cost, root / f"{i:06d}.sol")
    manifest = {
        "format": FORMAT,
        "version": VERSION,
        "spec": None if spec is None else spec.to_dict(),
        "label_source": sources.pop() if len(sources) == 1 else "mixed",
        "count": len(instances),
        "notes": notes or {},
        "stats": dataset_stats(instances),
    }
    (root / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def read_manifest(path) -> dict:
    mpath = Path(path) / "manifest.json"
    try:
        manifest = json.loads(mpath.read_text())
    except FileNotFoundError:
        raise EmptyDataset(f"{path}: no manifest.json") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"manifest is not JSON: {exc.msg}", exc.lineno, mpath) from None
    if manifest.get("format") != FORMAT or manifest.get("version") != VERSION:
        raise FormatError("unsupported manifest format/version", None, mpath)
    return manifest


def read_dataset(path) -> tuple[list[LabeledInstance], dict]:
    """Load every instance; ``.sol`` files are checked for feasibility and cost."""
    root = Path(path)
    manifest = read_manifest(root)
    source = manifest.get("label_source", "None")
    instances = []
    for i in range(int(manifest["count"])):
        g = read_mcg(root / f"{i:06d}.mcg")
        sol = root / f"{i:06d}.sol"
        if not sol.exists():
            instances.append(LabeledInstance(g))
            continue
        y, cost = read_sol(sol, g.edge_count)
        if not is_feasible(g, y):
            raise FormatError("stored labeling is infeasible", 2, sol)
        actual = multicut_cost(g, y)
        if abs(actual - cost) > 1e-9 * max(1.0, abs(cost)):
            raise FormatError(f"stored objective {cost!r} differs from labeling cost {actual!r}", 1, sol)
        instances.append(LabeledInstance(g, y, cost, source))
    if not instances:
        raise EmptyDataset(f"{path}: dataset has no instances")
    return instances, manifest
