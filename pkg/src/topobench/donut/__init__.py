from .assemble import VerificationReport, assemble_sample, build_component, verify_labels
from .dataset import (
    generate_dataset,
    load_manifest,
    verify_dataset,
    write_manifest,
)
from .labels import (
    GenerationConfig,
    GenusDecomposition,
    LabelPair,
    choose_decomposition,
    enumerate_genus_decompositions,
    sample_labels,
)

__all__ = [
    "LabelPair",
    "GenusDecomposition",
    "GenerationConfig",
    "sample_labels",
    "enumerate_genus_decompositions",
    "choose_decomposition",
    "build_component",
    "assemble_sample",
    "verify_labels",
    "VerificationReport",
    "generate_dataset",
    "verify_dataset",
    "write_manifest",
    "load_manifest",
]
