"""Wall time of GAEC and of an untrained 4x32 GCN_W as graphs grow.

    python3 demos/scaling.py
"""

from multicut_lab.bench import scale_study
from multicut_lab.gnn import ModelConfig, MulticutGNN

sizes = [100, 1000, 10000]
model = MulticutGNN(ModelConfig(), 0)
print(f"{'nodes':>6} {'edges':>6} {'solver':>6} {'seconds':>9} {'objective':>11}")
for solver, kw in (("gaec", {}), ("gnn", {"model": model}), ("exact", {})):
    for row in scale_study(solver, sizes, seed=0, repeats=3, **kw):
        t = "-" if row.wall_time is None else f"{row.wall_time:.4f}"
        obj = "-" if row.objective is None else f"{row.objective:.1f}"
        print(f"{row.nodes:>6} {row.edges:>6} {solver:>6} {t:>9} {obj:>11}  {row.status}")
