"""Minimum cost multicut workbench.

Exact and greedy solvers, chordless-cycle tools, a small autograd engine,
a trainable signed message-passing solver and synthetic dataset
generators.
"""

from .cycles import ChordlessCycleSet, count_cycle_violations, cycle_cut_counts, enumerate_chordless_cycles
from .errors import (
    BadCheckpoint,
    BadConfig,
    BudgetExceeded,
    DegenerateBatch,
    Disconnected,
    DuplicateEdge,
    EmptyDataset,
    EmptyInput,
    EndpointOutOfRange,
    FormatError,
    GraphError,
    LengthMismatch,
    MissingLabels,
    MulticutError,
    NonScalarLoss,
    SelfLoop,
    ShapeMismatch,
    TooLarge,
)
from .formats import dumps_mcg, dumps_sol, loads_mcg, loads_sol, read_mcg, read_sol, write_mcg, write_sol
from .graph import (
    NodePartition,
    WeightedGraph,
    build_graph,
    connected_components,
    from_arrays,
    harmonic_mean,
    is_feasible,
    labeling_from_partition,
    multicut_cost,
    optimal_objective_ratio,
)
from .solvers import SolveResult, exact_edge_label_oracle, exact_partition_solver, gaec

__version__ = "0.1.0"

__all__ = [
    "BadCheckpoint",
    "BadConfig",
    "BudgetExceeded",
    "ChordlessCycleSet",
    "DegenerateBatch",
    "Disconnected",
    "DuplicateEdge",
    "EmptyDataset",
    "EmptyInput",
    "EndpointOutOfRange",
    "FormatError",
    "GraphError",
    "LengthMismatch",
    "MissingLabels",
    "MulticutError",
    "NodePartition",
    "NonScalarLoss",
    "SelfLoop",
    "ShapeMismatch",
    "SolveResult",
    "TooLarge",
    "WeightedGraph",
    "build_graph",
    "connected_components",
    "count_cycle_violations",
    "cycle_cut_counts",
    "dumps_mcg",
    "dumps_sol",
    "enumerate_chordless_cycles",
    "exact_edge_label_oracle",
    "exact_partition_solver",
    "from_arrays",
    "gaec",
    "harmonic_mean",
    "is_feasible",
    "labeling_from_partition",
    "loads_mcg",
    "loads_sol",
    "multicut_cost",
    "optimal_objective_ratio",
    "read_mcg",
    "read_sol",
    "write_mcg",
    "write_sol",
]
