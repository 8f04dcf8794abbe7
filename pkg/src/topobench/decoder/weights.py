"""Weight manifests for the diagram decoder.

A manifest is a JSON schema (tensor names, shapes, byte offsets into a raw
little-endian float32 payload) plus the architecture configuration.  No
trained weights ship with the package; manifests are produced externally
by exporting a trained model, or randomly initialized for testing.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import InvalidParameterError
from ..rng import substream

FORMAT_VERSION = 1


@dataclass(frozen=True)
class DecoderConfig:
    n_queries: int = 250
    model_dim: int = 256
    n_heads: int = 8
    n_blocks: int = 6
    feature_dim: int = 384
    ffn_dim: int = 1024
    pos_hidden: int = 128
    head_hidden: int = 256
    norm_placement: str = "post"   # "post" matches the reference decoder

    def __post_init__(self):
        if self.model_dim % self.n_heads != 0:
            raise InvalidParameterError("model_dim must be divisible by n_heads")
        if self.norm_placement not in ("pre", "post"):
            raise InvalidParameterError("norm_placement must be 'pre' or 'post'")

    def to_dict(self):
        return {
            "n_queries": self.n_queries,
            "model_dim": self.model_dim,
            "n_heads": self.n_heads,
            "n_blocks": self.n_blocks,
            "feature_dim": self.feature_dim,
            "ffn_dim": self.ffn_dim,
            "pos_hidden": self.pos_hidden,
            "head_hidden": self.head_hidden,
            "norm_placement": self.norm_placement,
        }


def expected_shapes(config: DecoderConfig) -> dict:
    """The full tensor schema for a configuration."""
    d, f = config.model_dim, config.feature_dim
    shapes = {
        "queries": (config.n_queries, d),
        "adapter.norm.scale": (f,),
        "adapter.norm.shift": (f,),
        "adapter.proj.weight": (f, d),
        "adapter.proj.bias": (d,),
        "pos.mlp1.weight": (3, config.pos_hidden),
        "pos.mlp1.bias": (config.pos_hidden,),
        "pos.mlp2.weight": (config.pos_hidden, d),
        "pos.mlp2.bias": (d,),
        "final_norm.scale": (d,),
        "final_norm.shift": (d,),
        "exist_head.weight": (d, 1),
        "exist_head.bias": (1,),
    }
    for i in range(config.n_blocks):
        p = f"block{i}"
        for attn in ("self_attn", "cross_attn"):
            for proj in ("q", "k", "v", "out"):
                shapes[f"{p}.{attn}.{proj}.weight"] = (d, d)
                shapes[f"{p}.{attn}.{proj}.bias"] = (d,)
        shapes[f"{p}.ffn.1.weight"] = (d, config.ffn_dim)
        shapes[f"{p}.ffn.1.bias"] = (config.ffn_dim,)
        shapes[f"{p}.ffn.2.weight"] = (config.ffn_dim, d)
        shapes[f"{p}.ffn.2.bias"] = (d,)
        for k in (1, 2, 3):
            shapes[f"{p}.norm{k}.scale"] = (d,)
            shapes[f"{p}.norm{k}.shift"] = (d,)
    h = config.head_hidden
    shapes["pair_head.1.weight"] = (d, h)
    shapes["pair_head.1.bias"] = (h,)
    shapes["pair_head.2.weight"] = (h, h)
    shapes["pair_head.2.bias"] = (h,)
    shapes["pair_head.3.weight"] = (h, 2)
    shapes["pair_head.3.bias"] = (2,)
    return shapes


@dataclass(frozen=True)
class WeightManifest:
    config: DecoderConfig
    tensors: dict
    source: str = ""

    def __post_init__(self):
        schema = expected_shapes(self.config)
        missing = sorted(set(schema) - set(self.tensors))
        if missing:
            raise InvalidParameterError(f"manifest is missing tensors: {missing[:5]}...")
        for name, shape in schema.items():
            arr = np.asarray(self.tensors[name], dtype=np.float64)
            if arr.shape != shape:
                raise InvalidParameterError(
                    f"tensor {name} has shape {arr.shape}, expected {shape}")
        object.__setattr__(self, "tensors",
                           {k: np.asarray(v, dtype=np.float64) for k, v in self.tensors.items()})

    def __getitem__(self, name: str) -> np.ndarray:
        return self.tensors[name]


def random_manifest(seed: int, config: DecoderConfig = DecoderConfig(),
                    weight_scale: float = 0.05) -> WeightManifest:
    """Random initialization: small projections, identity norms, standard
    normal queries.  Used for property tests and golden regressions."""
    rng = substream(seed, "decoder-init")
    tensors = {}
    for name, shape in expected_shapes(config).items():
        if name.endswith(".scale"):
            tensors[name] = np.ones(shape)
        elif name.endswith(".shift"):
            tensors[name] = np.zeros(shape)
        elif name == "queries":
            tensors[name] = rng.normal(size=shape)
        elif name.endswith(".bias"):
            tensors[name] = np.zeros(shape)
        else:
            tensors[name] = rng.normal(scale=weight_scale, size=shape)
    return WeightManifest(config, tensors, source=f"random init, seed={seed}")


def save_weights(manifest: WeightManifest, base_path) -> None:
    """Write ``<base>.json`` (schema) and ``<base>.bin`` (payload).

    The base may carry its own suffix (``model.manifest`` works); the two
    companion files are always formed by appending.
    """
    base = str(base_path)
    names = sorted(manifest.tensors)
    entries = {}
    offset = 0
    chunks = []
    for name in names:
        arr = manifest.tensors[name].astype("<f4")
        entries[name] = {"shape": list(arr.shape), "offset": offset}
        chunks.append(arr.tobytes())
        offset += arr.nbytes
    Path(base + ".bin").write_bytes(b"".join(chunks))
    doc = {
        "format_version": FORMAT_VERSION,
        "config": manifest.config.to_dict(),
        "source": manifest.source,
        "tensors": entries,
    }
    Path(base + ".json").write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def load_weights(base_path) -> WeightManifest:
    base = str(base_path)
    if base.endswith(".json"):
        base = base[: -len(".json")]
    doc = json.loads(Path(base + ".json").read_text())
    if doc.get("format_version") != FORMAT_VERSION:
        raise InvalidParameterError(
            f"unsupported manifest format version {doc.get('format_version')}")
    payload = Path(base + ".bin").read_bytes()
    config = DecoderConfig(**doc["config"])
    tensors = {}
    for name, entry in doc["tensors"].items():
        shape = tuple(entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        start = entry["offset"]
        arr = np.frombuffer(payload, dtype="<f4", count=count, offset=start)
        tensors[name] = arr.reshape(shape).astype(np.float64)
    return WeightManifest(config, tensors, source=doc.get("source", ""))
