import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topobench.errors import InvalidParameterError, OpenSurfaceError
from topobench.geometry import (
    RigidTwist,
    ScalarField,
    TriangleMesh,
    apply_rigid_twist,
    cone_mesh,
    concatenate_meshes,
    connected_components,
    euler_characteristic,
    is_manifold,
    load_obj,
    load_off,
    load_pcf,
    marching_cubes,
    normalize_unit_sphere,
    random_rotation,
    sample_surface,
    save_obj,
    save_off,
    save_pcf,
    softmin_combine,
    softmin_field,
    superellipsoid_mesh,
    supertoroid_mesh,
    torus_sdf,
)
from topobench.rng import substream


def _unique_edge_count(mesh):
    edges = set()
    for a, b, c in mesh.triangles:
        edges.update({frozenset((a, b)), frozenset((b, c)), frozenset((a, c))})
    return len(edges)


class TestSuperellipsoid:
    def test_unit_sphere_topology(self):
        mesh = superellipsoid_mesh((1, 1, 1), (1, 1), (32, 32))
        assert euler_characteristic(mesh) == 2
        assert connected_components(mesh) == 1
        assert is_manifold(mesh)

    def test_topology_invariant_to_parameters(self):
        mesh = superellipsoid_mesh((2, 1, 0.5), (0.5, 1.5), (24, 16))
        assert euler_characteristic(mesh) == 2
        assert is_manifold(mesh)

    def test_vertex_count_matches_weld_oracle(self):
        # oracle: evaluate the closed parametric grid including the seam
        # column and pole rows, then deduplicate points exhaustively
        n_u = n_v = 8
        mesh = superellipsoid_mesh((1, 1, 1), (0.8, 1.2), (n_u, n_v))

        def c(t, e):
            return np.sign(np.cos(t)) * np.abs(np.cos(t)) ** e

        def s(t, e):
            return np.sign(np.sin(t)) * np.abs(np.sin(t)) ** e

        u = np.linspace(-np.pi, np.pi, n_u + 1)
        v = np.linspace(-np.pi / 2, np.pi / 2, n_v + 1)
        pts = set()
        for vv in v:
            for uu in u:
                x = c(vv, 0.8) * c(uu, 1.2)
                y = c(vv, 0.8) * s(uu, 1.2)
                z = s(vv, 0.8)
                pts.add((round(x, 9), round(y, 9), round(z, 9)))
        assert mesh.n_vertices == len(pts)

    def test_invalid_parameters(self):
        with pytest.raises(InvalidParameterError):
            superellipsoid_mesh((0, 1, 1), (1, 1), (32, 32))
        with pytest.raises(InvalidParameterError):
            superellipsoid_mesh((1, 1, 1), (1, 1), (4, 32))
        with pytest.raises(InvalidParameterError):
            superellipsoid_mesh((1, 1, 1), (0.1, 1), (32, 32))


class TestSupertoroid:
    def test_standard_torus(self):
        mesh = supertoroid_mesh((1, 1, 1), 2.0, (1, 1), (32, 32))
        assert euler_characteristic(mesh) == 0
        assert connected_components(mesh) == 1
        assert is_manifold(mesh)

    def test_every_edge_has_two_triangles(self):
        mesh = supertoroid_mesh((1, 0.8, 1.1), 2.5, (0.7, 1.4), (16, 24))
        counts = {}
        for a, b, c in mesh.triangles:
            for e in (frozenset((a, b)), frozenset((b, c)), frozenset((a, c))):
                counts[e] = counts.get(e, 0) + 1
        assert set(counts.values()) == {2}

    def test_simplex_counts_on_16x16_grid(self):
        mesh = supertoroid_mesh((1, 1, 1), 2.0, (1, 1), (16, 16))
        assert mesh.n_vertices == 256
        assert mesh.n_triangles == 512
        assert _unique_edge_count(mesh) == 768
        assert euler_characteristic(mesh) == 0

    def test_self_intersection_guard(self):
        with pytest.raises(InvalidParameterError):
            supertoroid_mesh((1, 1, 1), 1.0, (1, 1), (16, 16))


class TestCone:
    def test_minimal_cone(self):
        mesh = cone_mesh(1.0, 1.0, 3)
        assert euler_characteristic(mesh) == 2
        assert is_manifold(mesh)

    @pytest.mark.parametrize("segments", [3, 7, 32])
    def test_counts_by_construction_rule(self, segments):
        mesh = cone_mesh(0.7, 1.3, segments)
        assert mesh.n_vertices == segments + 2
        assert mesh.n_triangles == 2 * segments
        assert _unique_edge_count(mesh) == 3 * segments
        assert euler_characteristic(mesh) == 2

    def test_degenerate_height_rejected(self):
        with pytest.raises(InvalidParameterError):
            cone_mesh(1.0, 0.0, 8)


class TestTorusSdf:
    def test_tube_center_value(self):
        f = torus_sdf(ring_radius=1.0, tube_radius=0.25)
        val = f(np.array([[1.0, 0.0, 0.0]]))
        assert val[0] == pytest.approx(-0.25)

    def test_center_is_outside(self):
        f = torus_sdf(ring_radius=1.0, tube_radius=0.25)
        assert f(np.array([[0.0, 0.0, 0.0]]))[0] == pytest.approx(0.75)

    def test_exact_distance_in_ring_plane(self):
        R, r = 1.2, 0.3
        f = torus_sdf(ring_radius=R, tube_radius=r)
        d = f(np.array([[R + r + 1.0, 0.0, 0.0]]))[0]
        assert d == pytest.approx(1.0)

    def test_invalid_radii(self):
        with pytest.raises(InvalidParameterError):
            torus_sdf(ring_radius=0.5, tube_radius=0.5)


class TestSoftmin:
    def test_single_value_identity(self):
        assert softmin_combine([1.7], 3.0) == pytest.approx(1.7)

    def test_two_zeros(self):
        assert softmin_combine([0.0, 0.0], 1.0) == pytest.approx(-np.log(2.0))

    @given(st.lists(st.floats(-2, 2), min_size=1, max_size=10),
           st.floats(0.5, 100.0))
    def test_lower_bounds_min(self, values, k):
        assert softmin_combine(values, k) <= min(values) + 1e-12

    @given(st.lists(st.floats(-2, 2), min_size=1, max_size=10))
    @settings(max_examples=50)
    def test_sharp_limit_approaches_min(self, values):
        gap = min(values) - softmin_combine(values, 1000.0)
        assert 0 <= gap < 1e-2

    def test_empty_rejected(self):
        with pytest.raises(InvalidParameterError):
            softmin_combine([], 1.0)


def _sphere_field(radius=0.5, box=1.0):
    def evaluate(pts):
        return np.linalg.norm(pts, axis=1) - radius
    return ScalarField(evaluate, np.full(3, -box), np.full(3, box))


class TestMarchingCubes:
    def test_sphere_topology(self):
        mesh = marching_cubes(_sphere_field(), resolution=64, padding=0.0)
        assert euler_characteristic(mesh) == 2
        assert connected_components(mesh) == 1
        assert is_manifold(mesh)

    def test_three_welded_tori(self):
        R, r = 1.0, 0.35
        d = 2 * R - r
        fields = [torus_sdf(center=(i * d, 0, 0), ring_radius=R, tube_radius=r)
                  for i in range(3)]
        mesh = marching_cubes(softmin_field(fields, 32.0), resolution=96)
        assert euler_characteristic(mesh) == 2 - 2 * 3
        assert is_manifold(mesh)
        assert connected_components(mesh) == 1

    def test_isolevel_outside_range(self):
        with pytest.raises(OpenSurfaceError):
            marching_cubes(_sphere_field(), resolution=32, isolevel=10.0)

    def test_level_set_touching_boundary(self):
        # a sphere larger than its declared box crosses the grid boundary
        field = _sphere_field(radius=1.2, box=1.0)
        with pytest.raises(OpenSurfaceError):
            marching_cubes(field, resolution=32, padding=0.0)

    def test_resolution_floor(self):
        with pytest.raises(InvalidParameterError):
            marching_cubes(_sphere_field(), resolution=8)


class TestRigidTwist:
    def test_identity_is_bitwise_stable(self):
        mesh = supertoroid_mesh(resolution=(12, 12))
        out = apply_rigid_twist(mesh, RigidTwist())
        assert np.array_equal(out.vertices, mesh.vertices)
        assert np.array_equal(out.triangles, mesh.triangles)

    def test_connectivity_and_chi_invariant(self):
        mesh = superellipsoid_mesh(resolution=(16, 16))
        rng = substream(3, "test")
        t = RigidTwist(rotation=random_rotation(rng), translation=rng.normal(size=3),
                       twist_axis=rng.normal(size=3), twist_rate=1.3)
        out = apply_rigid_twist(mesh, t)
        assert out.n_vertices == mesh.n_vertices
        assert out.n_triangles == mesh.n_triangles
        assert _unique_edge_count(out) == _unique_edge_count(mesh)
        assert euler_characteristic(out) == euler_characteristic(mesh)

    def test_full_turn_twist_on_torus(self):
        mesh = supertoroid_mesh(resolution=(24, 24))
        height = np.ptp(mesh.vertices[:, 2])
        t = RigidTwist(twist_axis=(0, 0, 1), twist_rate=2 * np.pi / height)
        out = apply_rigid_twist(mesh, t)
        assert euler_characteristic(out) == 0
        assert is_manifold(out)

    def test_rejects_non_orthonormal_rotation(self):
        with pytest.raises(InvalidParameterError):
            RigidTwist(rotation=np.diag([2.0, 1.0, 1.0]))


class TestSampleSurface:
    def test_deterministic_in_seed(self):
        mesh = cone_mesh(1, 1, 16)
        a = sample_surface(mesh, 1024, seed=9)
        b = sample_surface(mesh, 1024, seed=9)
        assert np.array_equal(a, b)
        c = sample_surface(mesh, 1024, seed=10)
        assert not np.array_equal(a, c)

    def test_single_triangle_containment(self):
        mesh = TriangleMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])
        pt = sample_surface(mesh, 1, seed=0)[0]
        assert pt[2] == pytest.approx(0.0)
        assert pt[0] >= 0 and pt[1] >= 0 and pt[0] + pt[1] <= 1.0 + 1e-12

    def test_counts_proportional_to_area(self):
        # two triangles with a 3:1 area ratio in one mesh
        mesh = TriangleMesh(
            [[0, 0, 0], [3, 0, 0], [0, 2, 0], [10, 0, 0], [11, 0, 0], [10, 1, 0]],
            [[0, 1, 2], [3, 4, 5]])
        areas = mesh.triangle_areas()
        pts = sample_surface(mesh, 100_000, seed=4)
        on_big = np.sum(pts[:, 0] < 5.0)
        expected = 100_000 * areas[0] / areas.sum()
        sigma = np.sqrt(100_000 * (areas[0] / areas.sum()) * (areas[1] / areas.sum()))
        assert abs(on_big - expected) < 4 * sigma

    def test_zero_area_rejected(self):
        mesh = TriangleMesh([[0, 0, 0], [1, 0, 0], [2, 0, 0]], [[0, 1, 2]])
        with pytest.raises(InvalidParameterError):
            sample_surface(mesh, 10, seed=0)


class TestNormalize:
    def test_idempotent(self):
        rng = substream(0, "norm")
        cloud = rng.normal(size=(50, 3))
        once = normalize_unit_sphere(cloud)
        twice = normalize_unit_sphere(once)
        assert np.allclose(once, twice, atol=1e-12)

    def test_similarity_invariance(self):
        rng = substream(1, "norm")
        cloud = rng.normal(size=(50, 3))
        shifted = cloud * 7.0 + np.array([3.0, -2.0, 11.0])
        assert np.allclose(normalize_unit_sphere(cloud),
                           normalize_unit_sphere(shifted), atol=1e-12)

    def test_two_point_example(self):
        out = normalize_unit_sphere([[0, 0, 0], [0, 0, 2]])
        assert np.allclose(out, [[0, 0, -1], [0, 0, 1]])

    def test_empty_rejected(self):
        with pytest.raises(InvalidParameterError):
            normalize_unit_sphere(np.empty((0, 3)))


class TestTopologyMeasures:
    def test_torus(self):
        mesh = supertoroid_mesh(resolution=(16, 16))
        assert euler_characteristic(mesh) == 0
        assert connected_components(mesh) == 1
        assert is_manifold(mesh)

    def test_two_disjoint_spheres(self):
        a = superellipsoid_mesh(resolution=(12, 12))
        b = TriangleMesh(a.vertices + 10.0, a.triangles)
        both = concatenate_meshes([a, b])
        assert euler_characteristic(both) == 4
        assert connected_components(both) == 2

    def test_deleted_triangle_breaks_manifoldness(self):
        mesh = superellipsoid_mesh(resolution=(12, 12))
        broken = TriangleMesh(mesh.vertices, mesh.triangles[1:])
        assert not is_manifold(broken)


class TestMeshIO:
    def test_off_roundtrip(self, tmp_path):
        mesh = cone_mesh(1.0, 2.0, 12)
        path = tmp_path / "cone.off"
        save_off(mesh, path)
        back = load_off(path)
        assert np.array_equal(back.vertices, mesh.vertices)
        assert np.array_equal(back.triangles, mesh.triangles)

    def test_obj_roundtrip(self, tmp_path):
        mesh = supertoroid_mesh(resolution=(8, 8))
        path = tmp_path / "torus.obj"
        save_obj(mesh, path)
        back = load_obj(path)
        assert np.array_equal(back.vertices, mesh.vertices)
        assert np.array_equal(back.triangles, mesh.triangles)


class TestCloudIO:
    def test_pcf_roundtrip(self, tmp_path):
        cloud = substream(2, "io").normal(size=(33, 3)).astype(np.float32)
        path = tmp_path / "c.pcf"
        save_pcf(cloud, path)
        back = load_pcf(path)
        assert np.allclose(back, cloud, atol=1e-7)
        assert path.read_bytes()[:4] == b"PCF1"

    def test_pcf_rejects_bad_magic(self, tmp_path):
        path = tmp_path / "bad.pcf"
        path.write_bytes(b"NOPE" + b"\x00" * 16)
        with pytest.raises(InvalidParameterError):
            load_pcf(path)
