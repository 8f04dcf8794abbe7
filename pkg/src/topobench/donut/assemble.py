"""Component construction, augmentation and overlap-free placement.

Genus-0 components are superellipsoids or cones, genus-1 components are
supertoroids or implicit tori, genus-k components are chains of k
overlapping tori blended with a softmin and extracted by marching cubes
(each adjacent overlap is a single welded bridge, adding one handle).
Components are twisted, rotated, and placed with a guaranteed bounding-box
gap so each one keeps a private convex region; interlocking is therefore
impossible and the assembled labels are the sums of the component labels.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import AssemblyFailedError
from ..geometry.mesh import TriangleMesh, connected_components, euler_characteristic, is_manifold
from ..geometry.primitives import cone_mesh, superellipsoid_mesh, supertoroid_mesh
from ..geometry.sdf import marching_cubes, softmin_field, torus_sdf
from ..geometry.transforms import RigidTwist, apply_rigid_twist, random_rotation
from .labels import GenerationConfig, GenusDecomposition, LabelPair


def _uniform(rng, lo_hi):
    return float(rng.uniform(lo_hi[0], lo_hi[1]))


def _center_and_shrink(mesh: TriangleMesh, radius: float = 0.5) -> TriangleMesh:
    """Center on the AABB midpoint and scale to a bounding radius."""
    lo, hi = mesh.bounds()
    center = 0.5 * (lo + hi)
    v = mesh.vertices - center
    r = np.linalg.norm(v, axis=1).max()
    if r > 0:
        v = v * (radius / r)
    return TriangleMesh(v, mesh.triangles)


def build_component(genus: int, config: GenerationConfig, rng) -> tuple:
    """Build one random component of the requested genus.

    Returns (mesh, params) where params records the family and the drawn
    shape parameters for the manifest.
    """
    if genus == 0:
        if rng.random() < config.p_superellipsoid:
            scales = tuple(_uniform(rng, config.superellipsoid_scale_range) for _ in range(3))
            exps = (_uniform(rng, config.exponent_range), _uniform(rng, config.exponent_range))
            res = (config.mesh_resolution, config.mesh_resolution)
            mesh = superellipsoid_mesh(scales, exps, res)
            params = {"family": "superellipsoid", "scales": scales, "exponents": exps,
                      "resolution": res}
        else:
            radius = _uniform(rng, config.cone_radius_range)
            height = _uniform(rng, config.cone_height_range)
            mesh = cone_mesh(radius, height, config.cone_segments)
            params = {"family": "cone", "radius": radius, "height": height,
                      "segments": config.cone_segments}
    elif genus == 1 and rng.random() < config.p_supertoroid:
        scales = tuple(_uniform(rng, config.superellipsoid_scale_range) for _ in range(3))
        ring = _uniform(rng, config.toroid_ring_range)
        exps = (_uniform(rng, config.exponent_range), _uniform(rng, config.exponent_range))
        res = (config.mesh_resolution, config.mesh_resolution)
        mesh = supertoroid_mesh(scales, ring, exps, res)
        params = {"family": "supertoroid", "scales": scales, "ring_radius": ring,
                  "exponents": exps, "resolution": res}
    else:
        mesh, params = _torus_chain(genus, config, rng)
    params["genus"] = genus
    return _center_and_shrink(mesh), params


def _torus_chain(k: int, config: GenerationConfig, rng) -> tuple:
    """Implicit chain of k tori with single-bridge overlaps (genus k)."""
    rings = [(_uniform(rng, config.torus_ring_range)) for _ in range(k)]
    tubes = [r * _uniform(rng, config.torus_tube_fraction_range) for r in rings]
    centers = [np.zeros(3)]
    for i in range(1, k):
        # adjacent ring circles must cross while their tubes merge into a
        # single bridge around the midpoint; this spacing satisfies both
        d = rings[i - 1] + rings[i] - min(tubes[i - 1], tubes[i])
        centers.append(centers[-1] + np.array([d, 0.0, 0.0]))
    fields = [torus_sdf(center=c, axis=(0, 0, 1), ring_radius=R, tube_radius=r)
              for c, R, r in zip(centers, rings, tubes)]
    field = softmin_field(fields, config.softmin_sharpness)
    mesh = marching_cubes(field, resolution=config.mc_resolution)
    params = {"family": "torus-chain", "k": k, "ring_radii": rings,
              "tube_radii": tubes, "spacing_x": [float(c[0]) for c in centers],
              "softmin_sharpness": config.softmin_sharpness,
              "mc_resolution": config.mc_resolution}
    return mesh, params


def _aabb_gap(lo1, hi1, lo2, hi2) -> float:
    """Euclidean gap between two axis-aligned boxes (0 when they meet)."""
    sep = np.maximum(np.maximum(lo2 - hi1, lo1 - hi2), 0.0)
    return float(np.linalg.norm(sep))


@dataclass(frozen=True)
class VerificationReport:
    beta0_measured: int
    genus_total_measured: int
    manifold: bool
    per_component: tuple

    @property
    def ok(self) -> bool:
        return self.manifold

    def matches(self, label: LabelPair) -> bool:
        return (self.manifold
                and self.beta0_measured == label.beta0
                and self.genus_total_measured == label.genus_total)


def verify_labels(meshes) -> VerificationReport:
    """Measure (beta0, total genus) and manifoldness of the components."""
    beta0 = 0
    genus_total = 0
    all_manifold = True
    details = []
    for mesh in meshes:
        comps = connected_components(mesh)
        manifold = is_manifold(mesh)
        chi = euler_characteristic(mesh)
        g = (2 * comps - chi) // 2 if manifold and (2 * comps - chi) % 2 == 0 else -1
        beta0 += comps
        if g >= 0:
            genus_total += g
        all_manifold &= manifold and g >= 0
        details.append({"components": comps, "chi": chi, "genus": g,
                        "manifold": manifold})
    return VerificationReport(beta0, genus_total, all_manifold, tuple(details))


def assemble_sample(label: LabelPair, decomposition: GenusDecomposition,
                    config: GenerationConfig, rng) -> tuple:
    """Build, augment and place all components of one sample.

    Returns (meshes, component_params).  Raises
    :class:`AssemblyFailedError` when no overlap-free placement is found
    within the configured attempt budget; callers retry with a fresh
    substream.
    """
    genera = decomposition.genus_list()
    built = []
    for g in genera:
        mesh, params = build_component(g, config, rng)
        twist_turns = _uniform(rng, config.twist_rate_range)
        transform = RigidTwist(rotation=random_rotation(rng),
                               twist_axis=rng.normal(size=3),
                               twist_rate=twist_turns * 2.0 * np.pi)
        mesh = apply_rigid_twist(mesh, transform)
        params["twist_turns"] = twist_turns
        built.append((mesh, params))

    n = len(built)
    half_width = 0.75 * n ** (1.0 / 3.0)
    diameter = 2.0 * half_width * np.sqrt(3.0)
    min_gap = config.min_gap_fraction * diameter
    placed = []
    boxes = []
    for mesh, params in built:
        lo, hi = mesh.bounds()
        for attempt in range(config.placement_attempts):
            shift = rng.uniform(-half_width, half_width, size=3)
            ok = all(_aabb_gap(lo + shift, hi + shift, blo, bhi) >= min_gap
                     for blo, bhi in boxes)
            if ok:
                break
        else:
            raise AssemblyFailedError(
                f"no placement for a component after {config.placement_attempts} attempts")
        params["translation"] = [float(s) for s in shift]
        placed.append((TriangleMesh(mesh.vertices + shift, mesh.triangles), params))
        boxes.append((lo + shift, hi + shift))

    meshes = [m for m, _ in placed]
    return meshes, [p for _, p in placed]
