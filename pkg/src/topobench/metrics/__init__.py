from .clouds import chamfer, hausdorff
from .images import (
    ImageParams,
    PersistenceImage,
    PersistenceImager,
    image_error,
    persistence_image,
    pie,
)
from .wasserstein import bottleneck, wasserstein2

__all__ = [
    "wasserstein2",
    "bottleneck",
    "persistence_image",
    "image_error",
    "pie",
    "ImageParams",
    "PersistenceImage",
    "PersistenceImager",
    "hausdorff",
    "chamfer",
]
