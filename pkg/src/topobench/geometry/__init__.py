from .mesh import (
    TriangleMesh,
    concatenate_meshes,
    connected_components,
    euler_characteristic,
    genus,
    is_manifold,
    load_obj,
    load_off,
    merge_duplicate_vertices,
    save_obj,
    save_off,
    unique_edges,
)
from .primitives import cone_mesh, superellipsoid_mesh, supertoroid_mesh
from .sampling import (
    load_cloud_csv,
    load_pcf,
    normalize_unit_sphere,
    sample_surface,
    save_cloud_csv,
    save_pcf,
)
from .sdf import ScalarField, marching_cubes, softmin_combine, softmin_field, torus_sdf
from .transforms import RigidTwist, apply_rigid_twist, random_rotation

__all__ = [
    "TriangleMesh",
    "ScalarField",
    "RigidTwist",
    "superellipsoid_mesh",
    "supertoroid_mesh",
    "cone_mesh",
    "torus_sdf",
    "softmin_combine",
    "softmin_field",
    "marching_cubes",
    "apply_rigid_twist",
    "random_rotation",
    "sample_surface",
    "normalize_unit_sphere",
    "euler_characteristic",
    "connected_components",
    "is_manifold",
    "genus",
    "unique_edges",
    "merge_duplicate_vertices",
    "concatenate_meshes",
    "save_off",
    "load_off",
    "save_obj",
    "load_obj",
    "save_pcf",
    "load_pcf",
    "save_cloud_csv",
    "load_cloud_csv",
]
