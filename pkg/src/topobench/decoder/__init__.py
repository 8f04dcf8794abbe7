from .evaluate import evaluate
from .model import adapt, combine_blocks, decode, heads, predict_diagram
from .weights import (
    DecoderConfig,
    WeightManifest,
    expected_shapes,
    load_weights,
    random_manifest,
    save_weights,
)

__all__ = [
    "DecoderConfig",
    "WeightManifest",
    "expected_shapes",
    "random_manifest",
    "save_weights",
    "load_weights",
    "combine_blocks",
    "adapt",
    "decode",
    "heads",
    "predict_diagram",
    "evaluate",
]
