"""Implicit surfaces: torus signed-distance fields, softmin blending, and
isosurface extraction.

Genus-k components are built by placing k torus fields and blending them
with a softmin, which welds overlapping tubes into a single smooth solid.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np
from skimage import measure

from ..errors import InvalidParameterError, OpenSurfaceError
from .mesh import TriangleMesh, merge_duplicate_vertices

WELD_TOL = 1e-6


@dataclass(frozen=True)
class ScalarField:
    """A scalar function over a bounding box; negative values are inside."""

    evaluate: Callable[[np.ndarray], np.ndarray]
    lower: np.ndarray
    upper: np.ndarray

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.evaluate(np.atleast_2d(np.asarray(points, dtype=np.float64)))


def _orthonormal_frame(axis):
    """Rotation matrix whose third row is ``axis``."""
    w = np.asarray(axis, dtype=np.float64)
    n = np.linalg.norm(w)
    if n == 0:
        raise InvalidParameterError("axis must be a nonzero vector")
    w = w / n
    helper = np.array([1.0, 0.0, 0.0]) if abs(w[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = np.cross(w, helper)
    u /= np.linalg.norm(u)
    v = np.cross(w, u)
    return np.stack([u, v, w])


def torus_sdf(center=(0.0, 0.0, 0.0), axis=(0.0, 0.0, 1.0),
              ring_radius=1.0, tube_radius=0.25) -> ScalarField:
    """Exact signed distance to a torus with the given ring plane."""
    R, r = float(ring_radius), float(tube_radius)
    if not (0 < r < R):
        raise InvalidParameterError(f"need 0 < tube_radius < ring_radius, got r={r}, R={R}")
    center = np.asarray(center, dtype=np.float64)
    frame = _orthonormal_frame(axis)

    def evaluate(points):
        p = (np.asarray(points, dtype=np.float64) - center) @ frame.T
        q = np.hypot(p[:, 0], p[:, 1]) - R
        return np.hypot(q, p[:, 2]) - r

    extent = R + r
    lower = center - extent
    upper = center + extent
    return ScalarField(evaluate, lower, upper)


def softmin_combine(values, sharpness: float = 32.0):
    """Smooth minimum -(1/k) log(sum exp(-k s_i)), max-shifted for stability.

    Accepts a list of scalars, or a list of equal-length arrays which are
    combined elementwise.
    """
    if sharpness <= 0:
        raise InvalidParameterError(f"sharpness must be positive, got {sharpness}")
    vals = np.asarray(values, dtype=np.float64)
    if vals.size == 0:
        raise InvalidParameterError("softmin of an empty list is undefined")
    m = vals.min(axis=0)
    out = m - np.log(np.sum(np.exp(-sharpness * (vals - m)), axis=0)) / sharpness
    return float(out) if np.ndim(out) == 0 else out


def softmin_field(fields, sharpness: float = 32.0) -> ScalarField:
    """Blend several scalar fields into one via the softmin."""
    if not fields:
        raise InvalidParameterError("softmin of an empty field list is undefined")

    def evaluate(points):
        stack = np.stack([f.evaluate(points) for f in fields])
        return softmin_combine(stack, sharpness)

    lower = np.min([f.lower for f in fields], axis=0)
    upper = np.max([f.upper for f in fields], axis=0)
    return ScalarField(evaluate, lower, upper)


def marching_cubes(field: ScalarField, resolution=96, isolevel: float = 0.0,
                   padding: float = 0.1) -> TriangleMesh:
    """Extract the isosurface of ``field`` on a regular grid.

    The grid covers the field's bounding box expanded by ``padding``
    (fraction of the box diagonal).  Vertices within 1e-6 are welded so the
    output is watertight.  Raises :class:`OpenSurfaceError` when the level
    set touches the grid boundary or when the grid never crosses the level.
    """
    if np.isscalar(resolution):
        res = np.array([int(resolution)] * 3)
    else:
        res = np.asarray(resolution, dtype=int)
    if np.any(res < 16):
        raise InvalidParameterError(f"grid resolution must be >= 16 per axis, got {res}")

    lower = np.asarray(field.lower, dtype=np.float64)
    upper = np.asarray(field.upper, dtype=np.float64)
    pad = padding * np.linalg.norm(upper - lower)
    lower = lower - pad
    upper = upper + pad

    axes = [np.linspace(lower[i], upper[i], res[i]) for i in range(3)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
    values = field.evaluate(grid).reshape(res[0], res[1], res[2])

    if values.min() >= isolevel or values.max() <= isolevel:
        raise OpenSurfaceError("isolevel is outside the sampled field range")
    boundary_min = min(
        values[0].min(), values[-1].min(),
        values[:, 0].min(), values[:, -1].min(),
        values[:, :, 0].min(), values[:, :, -1].min(),
    )
    if boundary_min <= isolevel:
        raise OpenSurfaceError("level set touches the grid boundary; enlarge the box")

    spacing = (upper - lower) / (res - 1)
    verts, faces, _, _ = measure.marching_cubes(values, level=isolevel, spacing=tuple(spacing))
    verts = verts + lower
    return merge_duplicate_vertices(verts, faces, tol=WELD_TOL)
