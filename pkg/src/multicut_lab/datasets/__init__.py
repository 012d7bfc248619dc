from .generators import (
    KINDS,
    LABEL_MODES,
    PRESETS,
    DatasetSpec,
    generate_graphs,
    generate_scaling_graph,
    instance_rng,
    iris_graph,
    knn_graph,
    preset,
    randommp_graph,
)
from .iris_data import IRIS
from .store import (
    LabeledInstance,
    dataset_stats,
    generate_dataset,
    label_instances,
    read_dataset,
    read_manifest,
    write_dataset,
)


def generate_irismp(spec: DatasetSpec) -> list[LabeledInstance]:
    if spec.kind != "IrisMP":
        raise ValueError("generate_irismp needs an IrisMP spec")
    return generate_dataset(spec)[0]


def generate_randommp(spec: DatasetSpec) -> list[LabeledInstance]:
    if spec.kind != "RandomMP":
        raise ValueError("generate_randommp needs a RandomMP spec")
    return generate_dataset(spec)[0]


__all__ = [
    "IRIS",
    "KINDS",
    "LABEL_MODES",
    "PRESETS",
    "DatasetSpec",
    "LabeledInstance",
    "dataset_stats",
    "generate_dataset",
    "generate_graphs",
    "generate_irismp",
    "generate_randommp",
    "generate_scaling_graph",
    "instance_rng",
    "iris_graph",
    "knn_graph",
    "label_instances",
    "preset",
    "randommp_graph",
    "read_dataset",
    "read_manifest",
    "write_dataset",
]
