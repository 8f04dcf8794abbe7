"""Fixed-size vector summaries of persistence diagrams.

Two flavours: a closed-form top-k summary (the k most persistent pairs,
flattened), and a quantization summary that softly assigns diagram points
to k-means centers fitted on a reference collection.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from ..errors import InvalidParameterError
from ..rng import substream
from ..validation import check_pairs

SCALE_FLOOR = 1e-6


def _coords(diagram):
    if hasattr(diagram, "pairs"):
        return np.asarray(diagram.pairs, dtype=np.float64).reshape(-1, 2)
    return check_pairs(diagram, "diagram")


def topk_vectorize(diagram, k: int) -> np.ndarray:
    """Flatten the k most persistent (birth, death) pairs, zero-padded.

    Sorting is by persistence descending with (birth, death) tiebreaks, so
    the result is independent of the input order.
    """
    if k < 1:
        raise InvalidParameterError(f"k must be >= 1, got {k}")
    pairs = _coords(diagram)
    out = np.zeros(2 * k)
    if len(pairs):
        pers = pairs[:, 1] - pairs[:, 0]
        order = np.lexsort((pairs[:, 1], pairs[:, 0], -pers))
        top = pairs[order[:k]]
        out[: 2 * len(top)] = top.ravel()
    return out


def fit_quantization_centers(diagrams, n_centers: int, seed: int,
                             n_iterations: int = 25) -> np.ndarray:
    """Lloyd k-means on the pooled diagram points, seeded and fixed-length.

    Initial centers are drawn without replacement from the points; empty
    clusters keep their previous center.
    """
    points = [_coords(d) for d in diagrams]
    pool = np.concatenate([p for p in points if len(p)]) if points else np.empty((0, 2))
    if len(pool) < n_centers:
        raise InvalidParameterError(
            f"need at least {n_centers} diagram points, got {len(pool)}")
    rng = substream(seed, "quantization-centers")
    centers = pool[rng.choice(len(pool), size=n_centers, replace=False)].copy()
    for _ in range(n_iterations):
        d2 = ((pool[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        label = d2.argmin(axis=1)
        for j in range(n_centers):
            mask = label == j
            if mask.any():
                centers[j] = pool[mask].mean(axis=0)
    return centers


def _center_scales(diagrams, centers) -> np.ndarray:
    pool = np.concatenate([_coords(d) for d in diagrams if len(_coords(d))])
    d2 = ((pool[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    label = d2.argmin(axis=1)
    scales = np.full(len(centers), SCALE_FLOOR)
    for j in range(len(centers)):
        mask = label == j
        if mask.any():
            dist = np.sqrt(d2[mask, j])
            scales[j] = max(dist.mean(), SCALE_FLOOR)
    return scales


def atol_like_vectorize(diagram, centers, scales=None) -> np.ndarray:
    """Soft quantization feature: sum over pairs of exp(-dist/scale) per
    center.  An empty diagram maps to the zero vector."""
    pairs = _coords(diagram)
    centers = np.asarray(centers, dtype=np.float64)
    if scales is None:
        scales = np.full(len(centers), 1.0)
    scales = np.maximum(np.asarray(scales, dtype=np.float64), SCALE_FLOOR)
    if len(pairs) == 0:
        return np.zeros(len(centers))
    dist = np.sqrt(((pairs[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2))
    return np.exp(-dist / scales[None, :]).sum(axis=0)


class TopKVectorizer(BaseEstimator, TransformerMixin):
    """Stateless transformer: diagrams -> (n, 2k) top-k summaries."""

    def __init__(self, k=128):
        self.k = k

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        return np.stack([topk_vectorize(d, self.k) for d in X])


class QuantizationVectorizer(BaseEstimator, TransformerMixin):
    """Unsupervised quantization summary fitted on a diagram collection.

    ``fit`` learns k-means centers and per-center soft-assignment scales
    (mean distance of assigned points, floored); ``transform`` maps each
    diagram to its soft occupancy vector.
    """

    def __init__(self, n_centers=16, seed=0, n_iterations=25):
        self.n_centers = n_centers
        self.seed = seed
        self.n_iterations = n_iterations

    def fit(self, X, y=None):
        self.centers_ = fit_quantization_centers(X, self.n_centers, self.seed,
                                                 self.n_iterations)
        self.scales_ = _center_scales(X, self.centers_)
        return self

    def transform(self, X):
        if not hasattr(self, "centers_"):
            raise NotFittedError("QuantizationVectorizer must be fitted first")
        return np.stack([atol_like_vectorize(d, self.centers_, self.scales_) for d in X])
