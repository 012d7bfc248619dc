"""Train a small GCN_W on exactly labeled IrisMP-S graphs and compare with GAEC.

Takes about a minute on one core: labeling 400 graphs exactly dominates,
training runs 5 epochs of batch 100.

    python3 demos/train_and_evaluate.py
"""

import numpy as np

from multicut_lab import gaec, optimal_objective_ratio
from multicut_lab.datasets import generate_dataset, preset
from multicut_lab.gnn import TrainConfig, evaluate_model, train

train_set, _ = generate_dataset(preset("irismp-s", count=400, seed=1))
held_out, _ = generate_dataset(preset("irismp-s", count=100, seed=2))
print(f"{len(train_set)} training and {len(held_out)} held-out instances, "
      f"mean optimum {np.mean([i.optimal_cost for i in held_out]):.2f}")

cfg = TrainConfig(model={"depth": 4, "width": 32}, epochs=5, batch_size=100, alpha=0.001,
                  warmup_instances=1000, max_cycle_length=3, seed=0, eval_every=4)
model, curves = train(cfg, train_set, held_out,
                      log=lambda r: print(f"step {r['step']:3d}  bce {r['bce']:.4f}  alpha {r['alpha']}  "
                                          f"feasible {r['feasible_ratio']:.3f}  ratio {r['mean_ratio']:.4f}"))

gnn = evaluate_model(model, held_out)
greedy = np.mean([optimal_objective_ratio(gaec(i.graph).objective, i.optimal_cost) for i in held_out])
print(f"held-out mean optimal objective ratio: gnn {gnn.mean_ratio:.4f}, gaec {greedy:.4f}")
print(f"gnn optimal on {gnn.optimal_ratio:.1%} of instances, feasible before rounding on {gnn.feasible_ratio:.1%}")
