"""Ingested encoder features and their binary file format.

Features are produced by external encoders and read from disk; this
toolkit never runs an encoder.  The "FTN1" format is: 4-byte magic,
little-endian uint32 ndims, ndims uint32 sizes, then row-major float32
data.  Metadata travels in a JSON sidecar next to the tensor file.
"""

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import InvalidParameterError


@dataclass(frozen=True)
class FeatureTensor:
    """A feature array plus provenance metadata.

    ``data`` is (n_samples, d) for pooled features or
    (n_samples, n_patches, d) for per-patch features; ``metadata`` records
    encoder id, block index, pooling mode and point count.
    """

    data: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if not np.all(np.isfinite(arr)):
            raise InvalidParameterError("feature tensor contains non-finite values")
        block = self.metadata.get("block")
        if block is not None and not (1 <= int(block) <= 12):
            raise InvalidParameterError(f"block index must lie in [1, 12], got {block}")
        object.__setattr__(self, "data", arr)

    @property
    def n_samples(self) -> int:
        return self.data.shape[0]

    def pooled(self) -> np.ndarray:
        """(n_samples, d) view; per-patch tensors are max-pooled."""
        if self.data.ndim == 2:
            return self.data
        return self.data.max(axis=1)


def save_ftn(tensor, path, metadata: dict = None) -> None:
    arr = tensor.data if isinstance(tensor, FeatureTensor) else np.asarray(tensor)
    meta = dict(tensor.metadata) if isinstance(tensor, FeatureTensor) else {}
    if metadata:
        meta.update(metadata)
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(b"FTN1")
        fh.write(struct.pack("<I", arr.ndim))
        for s in arr.shape:
            fh.write(struct.pack("<I", s))
        fh.write(arr.astype("<f4").tobytes())
    if meta:
        path.with_suffix(path.suffix + ".json").write_text(
            json.dumps(meta, sort_keys=True, indent=2) + "\n")


def load_ftn(path) -> FeatureTensor:
    path = Path(path)
    with open(path, "rb") as fh:
        if fh.read(4) != b"FTN1":
            raise InvalidParameterError(f"{path} is not an FTN1 file")
        (ndim,) = struct.unpack("<I", fh.read(4))
        shape = struct.unpack(f"<{ndim}I", fh.read(4 * ndim))
        data = np.frombuffer(fh.read(), dtype="<f4")
    expected = int(np.prod(shape))
    if data.size != expected:
        raise InvalidParameterError(f"{path} is truncated")
    sidecar = path.with_suffix(path.suffix + ".json")
    meta = json.loads(sidecar.read_text()) if sidecar.exists() else {}
    return FeatureTensor(data.reshape(shape).astype(np.float64), meta)
