"""Persistence images and the persistence image error (PIE).

A diagram point (b, d) contributes a Gaussian bump at (b, d - b) in
birth-persistence coordinates, weighted linearly by its persistence.  The
image is the kernel sum at each cell center times the cell area, on a
fixed grid over [0, 1]^2.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ..errors import InvalidParameterError
from .wasserstein import _coords

COORDINATE_GUARD = 1.5


@dataclass(frozen=True)
class ImageParams:
    resolution: int = 50
    bandwidth: float = 0.05

    def __post_init__(self):
        if self.resolution < 2:
            raise InvalidParameterError(f"resolution must be >= 2, got {self.resolution}")
        if self.bandwidth <= 0:
            raise InvalidParameterError(f"bandwidth must be positive, got {self.bandwidth}")

    def key(self):
        return (int(self.resolution), float(self.bandwidth))


@dataclass(frozen=True)
class PersistenceImage:
    values: np.ndarray
    params: ImageParams

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))


def persistence_image(diagram, params: ImageParams = ImageParams()) -> PersistenceImage:
    """Rasterize a diagram whose coordinates have been scaled to [0, 1]."""
    pairs = _coords(diagram)
    res = params.resolution
    if pairs.size and np.abs(pairs).max() > COORDINATE_GUARD:
        raise InvalidParameterError(
            "diagram coordinates exceed 1.5; scale the dataset before imaging")
    centers = (np.arange(res) + 0.5) / res
    img = np.zeros((res, res))
    if pairs.size:
        b = pairs[:, 0]
        pers = pairs[:, 1] - pairs[:, 0]
        sig2 = 2.0 * params.bandwidth ** 2
        norm = 1.0 / (2.0 * np.pi * params.bandwidth ** 2)
        # kernels factorize over the two axes
        kb = np.exp(-((centers[None, :] - b[:, None]) ** 2) / sig2)     # (M, res)
        kp = np.exp(-((centers[None, :] - pers[:, None]) ** 2) / sig2)  # (M, res)
        weighted = kb * pers[:, None]
        img = norm * (weighted.T @ kp) / (res * res)
    return PersistenceImage(img, params)


def image_error(img_a: PersistenceImage, img_b: PersistenceImage) -> float:
    """Total squared difference between two images with identical params."""
    if img_a.params.key() != img_b.params.key():
        raise InvalidParameterError(
            f"image parameters differ: {img_a.params} vs {img_b.params}")
    diff = img_a.values - img_b.values
    return float(np.sum(diff * diff))


def pie(pred_diagram, true_diagram, params: ImageParams = ImageParams()) -> float:
    """Persistence image error between a thresholded prediction and the
    ground truth.  The caller must threshold the prediction first: every
    pair contributes to the image, even ones hugging the diagonal."""
    return image_error(persistence_image(pred_diagram, params),
                       persistence_image(true_diagram, params))


class PersistenceImager(BaseEstimator, TransformerMixin):
    """Stateless transformer: diagrams -> flattened persistence images."""

    def __init__(self, resolution=50, bandwidth=0.05):
        self.resolution = resolution
        self.bandwidth = bandwidth

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        params = ImageParams(self.resolution, self.bandwidth)
        return np.stack([persistence_image(d, params).values.ravel() for d in X])
