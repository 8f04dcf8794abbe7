"""Surface sampling, unit-sphere normalization, and point-cloud files.

Point clouds are plain (n, 3) float arrays.  The binary format is
"PCF1": 4-byte magic, little-endian uint32 count, then count*3 float32.
"""

import struct

import numpy as np

from ..errors import InvalidParameterError
from ..rng import substream
from ..validation import check_point_cloud
from .mesh import TriangleMesh


def sample_surface(mesh: TriangleMesh, n_points: int, seed: int) -> np.ndarray:
    """Area-weighted uniform surface samples; pure in (mesh, n, seed)."""
    if n_points < 1:
        raise InvalidParameterError(f"n_points must be >= 1, got {n_points}")
    areas = mesh.triangle_areas()
    total = areas.sum()
    if total <= 0:
        raise InvalidParameterError("mesh has zero surface area")
    rng = substream(seed, "surface-sample")
    idx = rng.choice(len(areas), size=n_points, p=areas / total)
    # uniform barycentric coordinates via the sqrt trick
    r1 = np.sqrt(rng.random(n_points))
    r2 = rng.random(n_points)
    a = mesh.vertices[mesh.triangles[idx, 0]]
    b = mesh.vertices[mesh.triangles[idx, 1]]
    c = mesh.vertices[mesh.triangles[idx, 2]]
    w0 = 1.0 - r1
    w1 = r1 * (1.0 - r2)
    w2 = r1 * r2
    return w0[:, None] * a + w1[:, None] * b + w2[:, None] * c


def normalize_unit_sphere(cloud) -> np.ndarray:
    """Center at the centroid and scale so the farthest point has norm 1.

    A degenerate cloud (all points identical) maps to all zeros.
    """
    pts = check_point_cloud(cloud, "cloud")
    centered = pts - pts.mean(axis=0)
    radius = np.linalg.norm(centered, axis=1).max()
    if radius == 0:
        return centered
    return centered / radius


def save_pcf(cloud, path) -> None:
    pts = check_point_cloud(cloud, "cloud").astype("<f4")
    with open(path, "wb") as fh:
        fh.write(b"PCF1")
        fh.write(struct.pack("<I", len(pts)))
        fh.write(pts.tobytes())


def load_pcf(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != b"PCF1":
            raise InvalidParameterError(f"{path} is not a PCF1 file")
        (count,) = struct.unpack("<I", fh.read(4))
        data = np.frombuffer(fh.read(count * 12), dtype="<f4")
    if data.size != count * 3:
        raise InvalidParameterError(f"{path} is truncated")
    return data.reshape(count, 3).astype(np.float64)


def save_cloud_csv(cloud, path) -> None:
    pts = check_point_cloud(cloud, "cloud")
    with open(path, "w") as fh:
        fh.write("x,y,z\n")
        for x, y, z in pts:
            fh.write(f"{float(x)!r},{float(y)!r},{float(z)!r}\n")


def load_cloud_csv(path) -> np.ndarray:
    rows = []
    with open(path) as fh:
        header = fh.readline()
        if header.strip() != "x,y,z":
            raise InvalidParameterError(f"{path} must start with header 'x,y,z'")
        for line in fh:
            if line.strip():
                rows.append([float(t) for t in line.split(",")])
    return np.asarray(rows, dtype=np.float64).reshape(-1, 3)
