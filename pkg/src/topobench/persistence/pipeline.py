"""Diagram post-processing (quantile thresholding, dataset scaling) and
sklearn-style transformers over collections of point clouds / diagrams."""

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from ..errors import InvalidParameterError
from ..validation import check_fraction
from .diagram import PersistenceDiagram
from .reduction import compute_persistence
from .rips import POINT_CAP, rips_filtration


def quantile_threshold(diagram: PersistenceDiagram, keep_fraction: float = 0.10) -> PersistenceDiagram:
    """Keep the ceil(keep_fraction * M) most persistent pairs.

    Ties in persistence are broken by (birth, death) lexicographic order so
    the result is deterministic.
    """
    check_fraction(keep_fraction, "keep_fraction")
    m = len(diagram)
    if m == 0:
        return diagram
    keep = math.ceil(keep_fraction * m)
    pers = diagram.persistence()
    order = np.lexsort((diagram.deaths, diagram.births, -pers))
    idx = order[:keep]
    return PersistenceDiagram(diagram.dimension, diagram.pairs[idx],
                              essential=diagram.essential[idx],
                              provenance=dict(diagram.provenance))


def scale_dataset(diagrams):
    """Scale a collection of diagrams by one shared factor.

    The factor is the maximum of max(birth, death) over every pair in the
    collection, so all scaled coordinates land in [0, 1].  Returns
    (scaled diagrams, scale).
    """
    diagrams = list(diagrams)
    maxima = [d.pairs.max() for d in diagrams if len(d)]
    if not maxima:
        raise InvalidParameterError("cannot scale a collection of empty diagrams")
    scale = float(max(maxima))
    scaled = [d.scaled(scale) if len(d) else d for d in diagrams]
    return scaled, scale


class VietorisRipsPersistence(BaseEstimator, TransformerMixin):
    """Stateless transformer: point clouds -> persistence diagrams.

    Parameters mirror :func:`rips_filtration` /
    :func:`compute_persistence`; ``transform`` maps a list of (n, 3) clouds
    to a list of diagrams in the configured homology dimension.
    """

    def __init__(self, homology_dim=1, max_edge=2.0, point_cap=POINT_CAP,
                 finite_only=False):
        self.homology_dim = homology_dim
        self.max_edge = max_edge
        self.point_cap = point_cap
        self.finite_only = finite_only

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        max_dim = 2 if self.homology_dim >= 1 else 1
        out = []
        for cloud in X:
            filt = rips_filtration(cloud, max_edge=self.max_edge, max_dim=max_dim,
                                   point_cap=self.point_cap)
            dgm = compute_persistence(filt, self.homology_dim)
            out.append(dgm.finite() if self.finite_only else dgm)
        return out


class DiagramQuantileThreshold(BaseEstimator, TransformerMixin):
    """Stateless transformer applying :func:`quantile_threshold`."""

    def __init__(self, keep_fraction=0.10):
        self.keep_fraction = keep_fraction

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        return [quantile_threshold(d, self.keep_fraction) for d in X]


class DiagramScaler(BaseEstimator, TransformerMixin):
    """Learn one dataset-wide scale on fit, divide every diagram on
    transform.  ``scale_`` is the fitted factor."""

    def fit(self, X, y=None):
        _, self.scale_ = scale_dataset(X)
        return self

    def transform(self, X):
        if not hasattr(self, "scale_"):
            raise NotFittedError("DiagramScaler must be fitted before transform")
        return [d.scaled(self.scale_) if len(d) else d for d in X]
