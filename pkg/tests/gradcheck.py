"""End-to-end finite-difference check of BCE + CCL through a small GCN_W.

The loss is piecewise smooth: ReLUs, the BCE probability clamp and the
CCL gate all switch branches.  A central difference whose stencil
straddles such a switch measures a secant across the kink, not the
derivative, so per coordinate the step is halved (from ``step`` down to
``min_step``) until both stencil points take the same branches.
"""

import numpy as np

from multicut_lab import build_graph, enumerate_chordless_cycles
from multicut_lab.gnn import ModelConfig, MulticutGNN, ccl_loss, make_batch
from multicut_lab.nn import Tape, add, backpropagate, bce_loss


def randomize(model, rng):
    """Random biases and running stats so ReLUs sit away from their kink."""
    for p in model.parameters():
        if p.name.endswith(("bias", "shift")):
            p.value[...] = rng.normal(scale=0.5, size=p.value.shape)
    for bn in model.batchnorms():
        bn.running_mean = rng.normal(scale=0.1, size=bn.running_mean.shape)
        bn.running_var = rng.uniform(0.5, 1.5, size=bn.running_var.shape)


def five_node_instance(rng):
    edges = [(i, j, rng.normal() * 3) for i in range(5) for j in range(i + 1, 5) if rng.random() < 0.8 or j == i + 1]
    return build_graph(5, edges)


def branch_pattern(tape) -> bytes:
    """Which side of every kink the recorded forward pass took."""
    out = []
    for node in tape.records:
        x = node.parents[0].value
        if node.op == "relu":
            out.append(np.packbits(x > 0).tobytes())
        elif node.op == "bce":
            out.append(np.packbits((x >= 1e-7) & (x <= 1 - 1e-7)).tobytes())
        elif node.op == "ccl":
            out.append(np.packbits(x >= 0.5).tobytes())
    return b"|".join(out)


def end_to_end_error(seed, step=1e-5, min_step=1e-9, stats=None):
    """Worst relative gradient error over all parameter arrays (batch norm in inference mode).

    ``stats`` (a dict) receives ``shrunk``: coordinates whose stencil had
    to be narrowed, ``fixed_step_error``: the error with ``step``
    everywhere, and ``unresolved``: coordinates still straddling a kink
    at ``min_step`` (left out of the comparison).
    """
    rng = np.random.default_rng(seed)
    g = five_node_instance(rng)
    cs = enumerate_chordless_cycles(g, 5)
    y = rng.integers(0, 2, g.edge_count)
    model = MulticutGNN(ModelConfig(backbone="GCN_W", depth=2, width=4), rng)
    randomize(model, rng)
    batch = make_batch([g], [cs], [y])

    def loss():
        _, p = model.forward(batch, training=False)
        return add(bce_loss(p, batch.labels), ccl_loss(p, batch.cycles, alpha=1.0))

    def probe() -> tuple[float, bytes]:
        with Tape() as t:
            v = loss()
        return v.value[0, 0], branch_pattern(t)

    with Tape() as tape:
        value = loss()
    grads = backpropagate(tape, value)
    worst = worst_fixed = 0.0
    shrunk = unresolved = 0
    for p in model.parameters():
        num = np.zeros_like(p.value)
        fixed = np.zeros_like(p.value)
        skip = np.zeros(p.value.shape, dtype=bool)
        for idx in np.ndindex(p.value.shape):
            old = p.value[idx]
            h = step
            while True:
                p.value[idx] = old + h
                a, pa = probe()
                p.value[idx] = old - h
                b, pb = probe()
                p.value[idx] = old
                if h == step:
                    fixed[idx] = (a - b) / (2 * h)
                if pa == pb or h / 2 < min_step:
                    break
                h /= 2
            shrunk += h < step
            skip[idx] = pa != pb
            unresolved += pa != pb
            num[idx] = (a - b) / (2 * h)
        ana = grads.get(p, np.zeros_like(num))
        for ref, which in ((num, "adaptive"), (fixed, "fixed")):
            keep = ~skip if which == "adaptive" else np.ones_like(skip)
            d = max(np.linalg.norm(ana[keep]), np.linalg.norm(ref[keep]))
            err = 0.0 if d < 1e-8 else float(np.linalg.norm((ana - ref)[keep]) / d)
            if which == "adaptive":
                worst = max(worst, err)
            else:
                worst_fixed = max(worst_fixed, err)
    if stats is not None:
        stats.update(shrunk=shrunk, unresolved=unresolved, fixed_step_error=worst_fixed)
    return worst
