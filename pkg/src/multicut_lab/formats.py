"""Text formats for instances (``.mcg``) and solutions (``.sol``).

``.mcg``::

    # optional comments anywhere
    p mc <n> <m>
    e <u> <v> <w>        (m lines, 0-based endpoints)

``.sol``::

    s <objective>
    <m space-separated 0/1 labels in edge-index order>

Weights are written with ``repr`` (shortest string that round-trips, at
most 17 significant digits), so read(write(g)) reproduces every bit.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .errors import FormatError, GraphError
from .graph import WeightedGraph, build_graph


def format_float(x: float) -> str:
    return repr(float(x))


def dumps_mcg(graph: WeightedGraph) -> str:
    lines = [f"p mc {graph.node_count} {graph.edge_count}"]
    lines.extend(
        f"e {a} {b} {format_float(w)}"
        for a, b, w in zip(graph.u.tolist(), graph.v.tolist(), graph.w.tolist())
    )
    return "\n".join(lines) + "\n"


def loads_mcg(text: str, path=None) -> WeightedGraph:
    header = None
    edges = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "mc":
                raise FormatError("expected header 'p mc <n> <m>'", lineno, path)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormatError("header counts must be integers", lineno, path) from None
            if header[0] < 1 or header[1] < 0:
                raise FormatError("header counts out of range", lineno, path)
            continue
        if len(parts) != 4 or parts[0] != "e":
            raise FormatError("expected edge line 'e <u> <v> <w>'", lineno, path)
        try:
            edges.append((int(parts[1]), int(parts[2]), float(parts[3])))
        except ValueError:
            raise FormatError(f"malformed edge line {line!r}", lineno, path) from None
    if header is None:
        raise FormatError("missing header 'p mc <n> <m>'", 1, path)
    if len(edges) != header[1]:
        raise FormatError(f"header declares {header[1]} edges, found {len(edges)}", None, path)
    try:
        return build_graph(header[0], edges)
    except GraphError as exc:
        raise FormatError(f"invalid graph: {exc}", None, path) from exc


def write_mcg(graph: WeightedGraph, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps_mcg(graph))


def read_mcg(path) -> WeightedGraph:
    with open(path, "r", newline="") as fh:
        return loads_mcg(fh.read(), path=os.fspath(path))


def dumps_sol(labeling, objective: float) -> str:
    y = np.asarray(labeling).astype(int)
    return f"s {format_float(objective)}\n" + " ".join(map(str, y.tolist())) + "\n"


def loads_sol(text: str, edge_count: int | None = None, path=None) -> tuple[np.ndarray, float]:
    lines = text.split("\n")
    if not lines or not lines[0].startswith("s "):
        raise FormatError("expected 's <objective>'", 1, path)
    try:
        objective = float(lines[0][2:])
    except ValueError:
        raise FormatError("objective is not a number", 1, path) from None
    body = lines[1] if len(lines) > 1 else ""
    tokens = body.split()
    if any(t not in ("0", "1") for t in tokens):
        raise FormatError("labels must be 0 or 1", 2, path)
    if edge_count is not None and len(tokens) != edge_count:
        raise FormatError(f"expected {edge_count} labels, found {len(tokens)}", 2, path)
    if any(line.strip() for line in lines[2:]):
        raise FormatError("unexpected content after labels", 3, path)
    return np.array([int(t) for t in tokens], dtype=np.int8), objective


def write_sol(labeling, objective: float, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps_sol(labeling, objective))


def read_sol(path, edge_count: int | None = None) -> tuple[np.ndarray, float]:
    return loads_sol(Path(path).read_text(), edge_count, path=os.fspath(path))
