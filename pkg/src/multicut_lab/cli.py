"""``multicut-lab`` command line.

Exit codes: 0 success, 1 runtime error, 2 usage error.  The seed falls
back to ``$MULTICUT_LAB_SEED`` and then 0 when ``--seed`` is omitted.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .errors import MulticutError

log = logging.getLogger("multicut_lab")

SEED_ENV = "MULTICUT_LAB_SEED"
KIND_CHOICES = ("irismp", "irismp-s", "randommp", "randommp-s", "scaling")
LABEL_CHOICES = {"exact": "Exact", "gaec": "GAEC", "none": "None"}


class UsageError(Exception):
    pass


def resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None


def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(float(s)) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None
    if not sizes or min(sizes) < 2:
        raise argparse.ArgumentTypeError("sizes must be integers >= 2")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="multicut-lab", description="Minimum cost multicut workbench.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a dataset directory")
    g.add_argument("--kind", required=True, choices=KIND_CHOICES)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--seed", type=int)
    g.add_argument("--out", required=True)
    g.add_argument("--label", choices=sorted(LABEL_CHOICES), help="default: exact for -s presets, else none")
    g.add_argument("--nodes", type=int, help="node count for --kind scaling")
    g.add_argument("--exact-cap", type=int, default=11)

    s = sub.add_parser("solve", help="solve one .mcg instance")
    s.add_argument("--solver", required=True, choices=("exact", "gaec", "gnn"))
    s.add_argument("--graph", required=True)
    s.add_argument("--model", help="checkpoint for --solver gnn")
    s.add_argument("--budget", type=float, help="GAEC time budget in seconds")
    s.add_argument("--l", type=int, dest="l", help="count chordless-cycle violations up to this length (gnn)")
    s.add_argument("--out", help="solution path (default: graph path with .sol)")
    s.add_argument("--embeddings", help="write node embeddings CSV (gnn)")
    s.add_argument("--exact-cap", type=int, default=12)

    t = sub.add_parser("train", help="train a model from a JSON config")
    t.add_argument("--config", required=True)
    t.add_argument("--out", required=True, help="checkpoint path")
    t.add_argument("--curves", help="curves CSV (default: <out>.curves.csv)")
    t.add_argument("--seed", type=int, help="overrides the config seed")

    e = sub.add_parser("eval", help="evaluate a solver on a dataset")
    e.add_argument("--dataset", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--solver", choices=("exact", "gaec", "gnn"), help="default: gnn with --model, else gaec")
    e.add_argument("--model")
    e.add_argument("--budget", type=float)
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--exact-cap", type=int, default=12)

    c = sub.add_parser("scale", help="runtime versus graph size")
    c.add_argument("--solver", required=True, choices=("exact", "gaec", "gnn"))
    c.add_argument("--sizes", required=True, type=_sizes, help="comma list, e.g. 100,1000,10000")
    c.add_argument("--seed", type=int)
    c.add_argument("--out", required=True)
    c.add_argument("--repeats", type=int, default=3)
    c.add_argument("--model", help="checkpoint for gnn (default: untrained 4x32 GCN_W)")
    c.add_argument("--budget", type=float)
    c.add_argument("--exact-cap", type=int, default=12)
    return p


def _load_model(path: str | None, solver: str, seed: int = 0):
    """Checkpoint for the gnn solver; without a path an untrained default model."""
    from .gnn import ModelConfig, MulticutGNN, load_checkpoint

    if solver != "gnn":
        return None
    if path is None:
        return MulticutGNN(ModelConfig(), seed)
    return load_checkpoint(path)


def cmd_generate(args) -> int:
    from .datasets import generate_dataset, preset, write_dataset

    seed = resolve_seed(args.seed)
    overrides = {"count": args.count, "seed": seed, "exact_cap": args.exact_cap}
    if args.label:
        overrides["label_mode"] = LABEL_CHOICES[args.label]
    if args.kind == "scaling":
        if args.nodes is None:
            raise UsageError("--kind scaling needs --nodes")
        overrides["nodes"] = args.nodes
    elif args.nodes is not None:
        raise UsageError("--nodes only applies to --kind scaling")
    try:
        spec = preset(args.kind, **overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    instances, notes = generate_dataset(spec)
    manifest = write_dataset(args.out, instances, spec, notes)
    print(json.dumps({"out": args.out, "count": manifest["count"], "label_source": manifest["label_source"],
                      "stats": manifest["stats"]}))
    return 0


def cmd_solve(args) -> int:
    from .bench import solve_graph
    from .formats import read_mcg, write_sol
    from .gnn import write_embeddings_csv

    if args.solver == "gnn" and not args.model:
        raise UsageError("--solver gnn needs --model")
    graph = read_mcg(args.graph)
    model = _load_model(args.model, args.solver)
    out = solve_graph(graph, args.solver, model, args.budget, args.exact_cap, args.l)
    res = out.result
    sol_path = args.out or str(Path(args.graph).with_suffix(".sol"))
    write_sol(res.labeling, res.objective, sol_path)
    line = {"graph": args.graph, "solver": args.solver, "objective": res.objective,
            "wall_time": res.wall_time, "status": res.status, "solution": sol_path}
    if out.prediction is not None:
        line["feasible_before_rounding"] = bool(out.feasible_before_rounding)
        if out.prediction.violations is not None:
            line["violations"] = out.prediction.violations
        if args.embeddings:
            write_embeddings_csv(out.prediction.node_embeddings, args.embeddings)
    print(json.dumps(line))
    return 0


def cmd_train(args) -> int:
    from .gnn import TrainConfig, save_checkpoint, train, write_curves_csv

    cfg = TrainConfig.load(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    elif SEED_ENV in os.environ and "seed" not in json.loads(Path(args.config).read_text()):
        cfg.seed = resolve_seed(None)
    base = Path(args.config).parent
    for attr in ("train_dataset", "eval_dataset"):
        value = getattr(cfg, attr)
        if value and not Path(value).is_absolute():
            setattr(cfg, attr, str(base / value))
    model, curves = train(cfg, log=lambda row: log.info("train %s", row))
    save_checkpoint(model, args.out)
    curves_path = args.curves or f"{args.out}.curves.csv"
    write_curves_csv(curves, curves_path)
    print(json.dumps({"checkpoint": args.out, "curves": curves_path, "final": curves[-1]}))
    return 0


def cmd_eval(args) -> int:
    from .bench import evaluate_dataset, write_eval_csv
    from .datasets import read_dataset

    solver = args.solver or ("gnn" if args.model else "gaec")
    if solver == "gnn" and not args.model:
        raise UsageError("--solver gnn needs --model")
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    instances, _ = read_dataset(args.dataset)
    model = _load_model(args.model, solver)
    records = evaluate_dataset(instances, solver, model, args.budget, args.exact_cap, args.jobs)
    write_eval_csv(records, args.out)
    s = records[-1]
    print(json.dumps({"out": args.out, "solver": solver, "instances": len(records) - 1,
                      "mean_ratio": s.ratio, "harmonic_mean": s.harmonic_mean,
                      "feasible_before_rounding": s.feasible_before_rounding}))
    return 0


def cmd_scale(args) -> int:
    from .bench import scale_study, write_scale_csv

    seed = resolve_seed(args.seed)
    model = _load_model(args.model, args.solver, seed)
    rows = scale_study(args.solver, args.sizes, seed, args.repeats, model, args.budget, args.exact_cap,
                       log=lambda r: log.info("scale %s", r))
    write_scale_csv(rows, args.out)
    print(json.dumps({"out": args.out, "rows": [r.__dict__ for r in rows]}))
    return 0


COMMANDS = {"generate": cmd_generate, "solve": cmd_solve, "train": cmd_train,
            "eval": cmd_eval, "scale": cmd_scale}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"multicut-lab {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (MulticutError, OSError, ValueError) as exc:
        print(f"multicut-lab {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
