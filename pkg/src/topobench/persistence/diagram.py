"""Persistence diagrams and their CSV serialization."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidParameterError
from ..validation import check_pairs


@dataclass(frozen=True)
class PersistenceDiagram:
    """Finite multiset of (birth, death) pairs for one homology dimension.

    ``essential`` flags bars that never die inside the filtration; their
    recorded death is the filtration cap.  ``provenance`` carries filtration
    type, point count, and any dataset-wide scale factor applied.
    """

    dimension: int
    pairs: np.ndarray
    essential: np.ndarray = None
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        pairs = check_pairs(self.pairs, "pairs")
        ess = self.essential
        if ess is None:
            ess = np.zeros(len(pairs), dtype=bool)
        else:
            ess = np.asarray(ess, dtype=bool)
            if ess.shape != (len(pairs),):
                raise InvalidParameterError("essential flags must match the pair count")
        finite = pairs[~ess]
        if finite.size and np.any(finite[:, 1] <= finite[:, 0]):
            raise InvalidParameterError("every finite pair needs death > birth")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "essential", ess)
        pairs.setflags(write=False)
        ess.setflags(write=False)

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def births(self) -> np.ndarray:
        return self.pairs[:, 0]

    @property
    def deaths(self) -> np.ndarray:
        return self.pairs[:, 1]

    def persistence(self) -> np.ndarray:
        return self.pairs[:, 1] - self.pairs[:, 0]

    def finite(self) -> "PersistenceDiagram":
        """Drop essential bars."""
        keep = ~self.essential
        return PersistenceDiagram(self.dimension, self.pairs[keep],
                                  provenance=dict(self.provenance))

    def scaled(self, scale: float) -> "PersistenceDiagram":
        if scale <= 0:
            raise InvalidParameterError(f"scale must be positive, got {scale}")
        prov = dict(self.provenance)
        prov["scale"] = prov.get("scale", 1.0) * scale
        return PersistenceDiagram(self.dimension, self.pairs / scale,
                                  essential=self.essential, provenance=prov)


def save_diagram_csv(diagrams, path) -> None:
    """Write one or more diagrams to a CSV with header ``dim,birth,death``."""
    if isinstance(diagrams, PersistenceDiagram):
        diagrams = [diagrams]
    with open(path, "w") as fh:
        fh.write("dim,birth,death\n")
        for dgm in diagrams:
            for b, d in dgm.pairs:
                fh.write(f"{dgm.dimension},{float(b)!r},{float(d)!r}\n")


def load_diagram_csv(path, dimension: int = None) -> PersistenceDiagram:
    """Read a diagram CSV; if ``dimension`` is None and the file mixes
    dimensions, an error is raised."""
    dims, rows = [], []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "dim,birth,death":
            raise InvalidParameterError(f"{path} must start with header 'dim,birth,death'")
        for line in fh:
            if not line.strip():
                continue
            q, b, d = line.split(",")
            dims.append(int(q))
            rows.append((float(b), float(d)))
    if dimension is not None:
        rows = [r for q, r in zip(dims, rows) if q == dimension]
        return PersistenceDiagram(dimension, np.asarray(rows, dtype=np.float64).reshape(-1, 2))
    uniq = sorted(set(dims))
    if len(uniq) > 1:
        raise InvalidParameterError(f"{path} mixes dimensions {uniq}; pass dimension=")
    q = uniq[0] if uniq else 0
    return PersistenceDiagram(q, np.asarray(rows, dtype=np.float64).reshape(-1, 2))
