"""Parametric shape primitives: superellipsoids, supertoroids, cones.

The superquadric surfaces use the exponentiated trigonometric functions

    c_eps(t) = sign(cos t) |cos t|^eps,   s_eps(t) = sign(sin t) |sin t|^eps

applied to a latitude/longitude grid.  All primitives return closed,
watertight triangle meshes.
"""

import numpy as np

from ..errors import InvalidParameterError
from .mesh import TriangleMesh


def _c(theta, eps):
    c = np.cos(theta)
    return np.sign(c) * np.abs(c) ** eps


def _s(theta, eps):
    s = np.sin(theta)
    return np.sign(s) * np.abs(s) ** eps


def _check_scales(scales):
    scales = tuple(float(s) for s in scales)
    if len(scales) != 3 or any(s <= 0 for s in scales):
        raise InvalidParameterError(f"scales must be 3 positive reals, got {scales}")
    return scales


def superellipsoid_mesh(scales=(1.0, 1.0, 1.0), exponents=(1.0, 1.0),
                        resolution=(32, 32)) -> TriangleMesh:
    """Closed genus-0 superellipsoid.

    ``resolution=(n_u, n_v)`` gives n_u longitude steps and n_v latitude
    bands.  The poles are welded to a single apex vertex each (fan
    triangulation), which keeps the mesh watertight for every exponent.
    """
    sx, sy, sz = _check_scales(scales)
    e1, e2 = float(exponents[0]), float(exponents[1])
    n_u, n_v = int(resolution[0]), int(resolution[1])
    if n_u < 8 or n_v < 8:
        raise InvalidParameterError(f"resolution must be >= 8 per axis, got {resolution}")
    if not (0.2 <= e1 <= 2.0 and 0.2 <= e2 <= 2.0):
        raise InvalidParameterError(f"exponents must lie in [0.2, 2.0], got {exponents}")

    u = np.linspace(-np.pi, np.pi, n_u, endpoint=False)
    v = np.linspace(-np.pi / 2, np.pi / 2, n_v + 1)[1:-1]  # interior latitudes
    uu, vv = np.meshgrid(u, v)  # (n_v-1, n_u)

    x = sx * _c(vv, e1) * _c(uu, e2)
    y = sy * _c(vv, e1) * _s(uu, e2)
    z = sz * _s(vv, e1)
    ring_verts = np.stack([x, y, z], axis=-1).reshape(-1, 3)
    south = np.array([[0.0, 0.0, -sz]])
    north = np.array([[0.0, 0.0, sz]])
    verts = np.concatenate([south, ring_verts, north])

    n_rows = n_v - 1
    tris = []
    # south fan (row 0 sits just above the south pole)
    for i in range(n_u):
        j = (i + 1) % n_u
        tris.append([0, 1 + j, 1 + i])
    # latitude bands
    for r in range(n_rows - 1):
        base0 = 1 + r * n_u
        base1 = 1 + (r + 1) * n_u
        for i in range(n_u):
            j = (i + 1) % n_u
            tris.append([base0 + i, base0 + j, base1 + i])
            tris.append([base0 + j, base1 + j, base1 + i])
    # north fan
    apex = 1 + n_rows * n_u
    base = 1 + (n_rows - 1) * n_u
    for i in range(n_u):
        j = (i + 1) % n_u
        tris.append([apex, base + i, base + j])
    return TriangleMesh(verts, np.array(tris, dtype=np.int64))


def supertoroid_mesh(scales=(1.0, 1.0, 1.0), ring_radius=2.0, exponents=(1.0, 1.0),
                     resolution=(32, 32)) -> TriangleMesh:
    """Closed genus-1 supertoroid with normalized tube radius 1.

    ``ring_radius`` must exceed 1 so the tube cannot self-intersect.
    """
    sx, sy, sz = _check_scales(scales)
    R = float(ring_radius)
    if R <= 1.0:
        raise InvalidParameterError(f"ring_radius must be > 1, got {R}")
    e1, e2 = float(exponents[0]), float(exponents[1])
    n_u, n_v = int(resolution[0]), int(resolution[1])
    if n_u < 8 or n_v < 8:
        raise InvalidParameterError(f"resolution must be >= 8 per axis, got {resolution}")

    u = np.linspace(-np.pi, np.pi, n_u, endpoint=False)
    v = np.linspace(-np.pi, np.pi, n_v, endpoint=False)
    uu, vv = np.meshgrid(u, v)  # (n_v, n_u), both periodic

    rad = R + _c(vv, e1)
    x = sx * rad * _c(uu, e2)
    y = sy * rad * _s(uu, e2)
    z = sz * _s(vv, e1)
    verts = np.stack([x, y, z], axis=-1).reshape(-1, 3)

    tris = []
    for r in range(n_v):
        r1 = (r + 1) % n_v
        for i in range(n_u):
            j = (i + 1) % n_u
            a, b = r * n_u + i, r * n_u + j
            c, d = r1 * n_u + i, r1 * n_u + j
            tris.append([a, b, c])
            tris.append([b, d, c])
    return TriangleMesh(verts, np.array(tris, dtype=np.int64))


def cone_mesh(radius=1.0, height=1.0, segments=32) -> TriangleMesh:
    """Closed cone (capped base) of genus 0."""
    radius, height = float(radius), float(height)
    segments = int(segments)
    if radius <= 0 or height <= 0:
        raise InvalidParameterError(f"radius and height must be positive, got {radius}, {height}")
    if segments < 3:
        raise InvalidParameterError(f"segments must be >= 3, got {segments}")
    theta = np.linspace(0, 2 * np.pi, segments, endpoint=False)
    rim = np.stack([radius * np.cos(theta), radius * np.sin(theta), np.zeros(segments)], axis=-1)
    apex = np.array([[0.0, 0.0, height]])
    center = np.array([[0.0, 0.0, 0.0]])
    verts = np.concatenate([apex, center, rim])
    tris = []
    for i in range(segments):
        j = (i + 1) % segments
        tris.append([0, 2 + i, 2 + j])   # side
        tris.append([1, 2 + j, 2 + i])   # base fan, opposite winding
    return TriangleMesh(verts, np.array(tris, dtype=np.int64))
