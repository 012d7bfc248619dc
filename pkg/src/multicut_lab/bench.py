"""Benchmark harness: per-instance records, dataset evaluation, scaling runs.

CSV layouts (schema version 1, header row always present):

eval
    ``instance, solver, objective, optimal_objective, ratio, harmonic_mean,
    feasible_before_rounding, wall_time, status``; one row per instance in
    id order, then a ``summary`` row holding means (``ratio``), the harmonic
    mean of the ratios and the feasible-before-rounding fraction.
scale
    ``nodes, edges, solver, objective, wall_time, repeats, status``; the
    wall time is the median over repeats.

Times cover the solver call only (no file I/O).
"""

from __future__ import annotations

import csv
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import MissingLabels, TooLarge
from .graph import WeightedGraph, harmonic_mean, optimal_objective_ratio
from .solvers import DEFAULT_EXACT_CAP, SolveResult, exact_partition_solver, gaec

SOLVERS = ("exact", "gaec", "gnn")
EVAL_COLUMNS = ("instance", "solver", "objective", "optimal_objective", "ratio", "harmonic_mean",
                "feasible_before_rounding", "wall_time", "status")
SCALE_COLUMNS = ("nodes", "edges", "solver", "objective", "wall_time", "repeats", "status")


@dataclass
class BenchRecord:
    instance: str
    solver: str
    objective: float | None
    optimal_objective: float | None = None
    ratio: float | None = None
    harmonic_mean: float | None = None
    feasible_before_rounding: float | bool | None = None
    wall_time: float = 0.0
    status: str = ""

    def row(self) -> list[str]:
        return [_cell(getattr(self, c)) for c in EVAL_COLUMNS]


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass
class Outcome:
    result: SolveResult
    feasible_before_rounding: bool | None = None
    prediction: object = None


def solve_graph(graph: WeightedGraph, solver: str, model=None, budget: float | None = None,
                exact_cap: int = DEFAULT_EXACT_CAP, l: int | None = None) -> Outcome:
    """Run one solver; ``wall_time`` spans the solver work only."""
    if solver == "exact":
        return Outcome(exact_partition_solver(graph, cap=exact_cap))
    if solver == "gaec":
        return Outcome(gaec(graph, time_budget=budget))
    if solver == "gnn":
        from .gnn import predict

        if model is None:
            raise ValueError("the gnn solver needs a model")
        pred = predict(model, graph, l)
        res = SolveResult(pred.labeling, pred.objective, pred.forward_time + pred.rounding_time, "Heuristic")
        return Outcome(res, pred.feasible_before_rounding, pred)
    raise ValueError(f"unknown solver {solver!r}; choose from {SOLVERS}")


def _eval_one(args) -> BenchRecord:
    name, inst, solver, model, budget, exact_cap = args
    try:
        out = solve_graph(inst.graph, solver, model, budget, exact_cap)
    except TooLarge:
        return BenchRecord(name, solver, None, inst.optimal_cost, status="TooLarge")
    res = out.result
    ratio = None
    if inst.optimal_cost is not None:
        ratio = optimal_objective_ratio(res.objective, inst.optimal_cost)
    return BenchRecord(name, solver, res.objective, inst.optimal_cost, ratio, None,
                       out.feasible_before_rounding, res.wall_time, res.status)


def evaluate_dataset(instances, solver: str, model=None, budget: float | None = None,
                     exact_cap: int = DEFAULT_EXACT_CAP, jobs: int = 1,
                     require_labels: bool = False) -> list[BenchRecord]:
    """Per-instance records in id order followed by one summary record."""
    if require_labels and any(inst.optimal_cost is None for inst in instances):
        raise MissingLabels("dataset has unlabeled instances")
    tasks = [(f"{i:06d}", inst, solver, model, budget, exact_cap) for i, inst in enumerate(instances)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_eval_one, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        records = [_eval_one(t) for t in tasks]
    return records + [summarize(records, solver)]


def summarize(records: list[BenchRecord], solver: str) -> BenchRecord:
    solved = [r for r in records if r.objective is not None]
    ratios = [r.ratio for r in solved if r.ratio is not None]
    fbr = [r.feasible_before_rounding for r in solved if r.feasible_before_rounding is not None]
    opts = [r.optimal_objective for r in solved if r.optimal_objective is not None]
    return BenchRecord(
        instance="summary",
        solver=solver,
        objective=float(np.mean([r.objective for r in solved])) if solved else None,
        optimal_objective=float(np.mean(opts)) if opts else None,
        ratio=float(np.mean(ratios)) if ratios else None,
        harmonic_mean=harmonic_mean(ratios) if ratios else None,
        feasible_before_rounding=float(np.mean(fbr)) if fbr else None,
        wall_time=float(np.mean([r.wall_time for r in solved])) if solved else 0.0,
        status=f"{len(solved)}/{len(records)} solved",
    )


def write_eval_csv(records: list[BenchRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(EVAL_COLUMNS)
        for r in records:
            w.writerow(r.row())


# ------------------------------------------------------------------ scaling


@dataclass
class ScaleRow:
    nodes: int
    edges: int
    solver: str
    objective: float | None
    wall_time: float | None
    repeats: int
    status: str

    def row(self) -> list[str]:
        return [_cell(getattr(self, c)) for c in SCALE_COLUMNS]


def scale_study(solver: str, sizes, seed: int = 0, repeats: int = 3, model=None,
                budget: float | None = None, exact_cap: int = DEFAULT_EXACT_CAP,
                log=None) -> list[ScaleRow]:
    """Median solver time per graph size; oversize exact runs become rows."""
    from .datasets import generate_scaling_graph, instance_rng

    rows = []
    for n in sizes:
        g = generate_scaling_graph(int(n), instance_rng(seed, int(n)))
        times, objective, status = [], None, ""
        try:
            for _ in range(max(1, repeats)):
                out = solve_graph(g, solver, model, budget, exact_cap)
                times.append(out.result.wall_time)
                objective, status = out.result.objective, out.result.status
        except TooLarge:
            status = "TooLarge"
        row = ScaleRow(g.node_count, g.edge_count, solver, objective,
                       statistics.median(times) if times else None, len(times), status)
        rows.append(row)
        if log is not None:
            log(row)
    return rows


def write_scale_csv(rows: list[ScaleRow], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SCALE_COLUMNS)
        for r in rows:
            w.writerow(r.row())

