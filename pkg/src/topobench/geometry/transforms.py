"""Rigid motions with an optional twist, the topology-preserving
augmentation applied to every generated component."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidParameterError
from .mesh import TriangleMesh


@dataclass(frozen=True)
class RigidTwist:
    """Twist about an axis followed by a rigid motion.

    Each vertex is first rotated about ``twist_axis`` (through the origin)
    by ``twist_rate`` times its coordinate along the axis, then mapped by
    ``rotation`` and ``translation``.  Both steps are homeomorphisms, so
    connectivity, component count and genus are preserved.
    """

    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))
    translation: np.ndarray = field(default_factory=lambda: np.zeros(3))
    twist_axis: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    twist_rate: float = 0.0

    def __post_init__(self):
        rot = np.asarray(self.rotation, dtype=np.float64)
        if rot.shape != (3, 3) or not np.allclose(rot @ rot.T, np.eye(3), atol=1e-9) \
                or not np.isclose(np.linalg.det(rot), 1.0, atol=1e-9):
            raise InvalidParameterError("rotation must be orthonormal with determinant +1")
        axis = np.asarray(self.twist_axis, dtype=np.float64)
        n = np.linalg.norm(axis)
        if n == 0:
            raise InvalidParameterError("twist_axis must be nonzero")
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "translation", np.asarray(self.translation, dtype=np.float64))
        object.__setattr__(self, "twist_axis", axis / n)
        object.__setattr__(self, "twist_rate", float(self.twist_rate))


def _axis_rotation_matrices(axis, angles):
    """Rodrigues rotation matrices about ``axis`` for a vector of angles."""
    k = axis
    K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    eye = np.eye(3)
    sin = np.sin(angles)[:, None, None]
    cos = np.cos(angles)[:, None, None]
    return eye[None] + sin * K[None] + (1 - cos) * (K @ K)[None]


def apply_rigid_twist(mesh: TriangleMesh, transform: RigidTwist) -> TriangleMesh:
    """Apply the twist-then-rigid-motion map to every vertex.

    Connectivity is untouched, so V, E, F and hence the Euler
    characteristic are invariant.
    """
    v = mesh.vertices
    if transform.twist_rate != 0.0:
        heights = v @ transform.twist_axis
        mats = _axis_rotation_matrices(transform.twist_axis, transform.twist_rate * heights)
        v = np.einsum("nij,nj->ni", mats, v)
    v = v @ transform.rotation.T + transform.translation
    return TriangleMesh(v, mesh.triangles)


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniform random rotation matrix from a normalized quaternion."""
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])
