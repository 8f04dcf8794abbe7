import json

import numpy as np
import pytest

from topobench.donut import (
    GenerationConfig,
    GenusDecomposition,
    LabelPair,
    assemble_sample,
    build_component,
    choose_decomposition,
    enumerate_genus_decompositions,
    generate_dataset,
    sample_labels,
    verify_labels,
)
from topobench.errors import InvalidParameterError
from topobench.geometry import (
    RigidTwist,
    apply_rigid_twist,
    euler_characteristic,
    random_rotation,
    supertoroid_mesh,
    superellipsoid_mesh,
    TriangleMesh,
)
from topobench.rng import substream


def _brute_force_decompositions(a, b, g_max):
    out = set()

    def rec(remaining, total, j, acc):
        if j > g_max:
            if remaining == 0 and total == 0:
                out.add(tuple(acc))
            return
        for n_j in range(remaining + 1):
            if j > 0 and j * n_j > total:
                break
            rec(remaining - n_j, total - j * n_j, j + 1, acc + [n_j])

    rec(a, b, 0, [])
    return out


class TestSampleLabels:
    def test_exact_multiset_sizes(self):
        config = GenerationConfig(seed=11)
        labels = sample_labels(config)
        assert len(labels) == 6000
        for beta0 in range(1, 7):
            assert sum(1 for l in labels if l.beta0 == beta0) == 1000

    def test_single_component_respects_per_component_cap(self):
        config = GenerationConfig(seed=12)
        labels = sample_labels(config)
        assert all(l.genus_total <= 5 for l in labels if l.beta0 == 1)
        assert all(l.genus_total <= 10 for l in labels)

    def test_deterministic(self):
        a = sample_labels(GenerationConfig(seed=13), k_replicates=50)
        b = sample_labels(GenerationConfig(seed=13), k_replicates=50)
        assert a == b

    def test_genus_uniform_for_two_components(self):
        config = GenerationConfig(seed=14)
        labels = sample_labels(config, k_replicates=10_000)
        counts = np.bincount([l.genus_total for l in labels if l.beta0 == 2],
                             minlength=11)
        expected = 10_000 / 11
        sigma = np.sqrt(10_000 * (1 / 11) * (10 / 11))
        assert np.all(np.abs(counts - expected) < 3 * sigma)


class TestEnumerateDecompositions:
    def test_trivial_single_component(self):
        sols = enumerate_genus_decompositions(1, 0, 5)
        assert len(sols) == 1
        assert sols[0].counts == (1, 0, 0, 0, 0, 0)

    def test_infeasible_total_gives_empty_set(self):
        assert enumerate_genus_decompositions(2, 11, 5) == []

    def test_three_components_total_four(self):
        sols = enumerate_genus_decompositions(3, 4, 5)
        assert len(sols) == 4
        partitions = {tuple(sorted((g for g in s.genus_list() if g > 0), reverse=True))
                      for s in sols}
        assert partitions == {(4,), (3, 1), (2, 2), (2, 1, 1)}

    def test_matches_brute_force_over_full_range(self):
        for a in range(1, 7):
            for b in range(0, 11):
                got = {s.counts for s in enumerate_genus_decompositions(a, b, 5)}
                assert got == _brute_force_decompositions(a, b, 5), (a, b)

    def test_consistency_of_sums(self):
        for s in enumerate_genus_decompositions(4, 7, 5):
            assert s.n_components == 4
            assert s.genus_total == 7

    def test_uniform_choice_among_solutions(self):
        config = GenerationConfig(seed=15)
        label = LabelPair(3, 4)
        rng = substream(99, "choice")
        counts = {}
        for _ in range(10_000):
            sol = choose_decomposition(label, config, rng)
            counts[sol.counts] = counts.get(sol.counts, 0) + 1
        assert len(counts) == 4
        for c in counts.values():
            assert abs(c / 10_000 - 0.25) < 0.02


class TestBuildComponent:
    @pytest.mark.parametrize("genus", [0, 1, 2, 3])
    def test_component_has_requested_genus(self, genus):
        config = GenerationConfig(seed=16)
        rng = substream(16, "component", genus)
        mesh, params = build_component(genus, config, rng)
        report = verify_labels([mesh])
        assert report.manifold
        assert report.beta0_measured == 1
        assert report.genus_total_measured == genus
        assert params["genus"] == genus

    def test_component_fits_in_unit_ball(self):
        config = GenerationConfig(seed=17)
        rng = substream(17, "component")
        mesh, _ = build_component(2, config, rng)
        assert np.linalg.norm(mesh.vertices, axis=1).max() <= 0.5 + 1e-9


class TestAssembleSample:
    def test_single_genus_zero_sample(self):
        config = GenerationConfig(seed=18)
        rng = substream(18, "assemble")
        label = LabelPair(1, 0)
        meshes, comps = assemble_sample(label, GenusDecomposition((1, 0, 0, 0, 0, 0)),
                                        config, rng)
        assert len(meshes) == 1
        assert verify_labels(meshes).matches(label)

    def test_two_components_genus_three(self):
        config = GenerationConfig(seed=19)
        rng = substream(19, "assemble")
        label = LabelPair(2, 3)
        decomposition = GenusDecomposition((0, 1, 1, 0, 0, 0))  # genus 1 + genus 2
        meshes, comps = assemble_sample(label, decomposition, config, rng)
        chis = sorted(euler_characteristic(m) for m in meshes)
        assert chis == [-2, 0]
        assert sum(chis) == -2
        assert verify_labels(meshes).matches(label)

    def test_positive_pairwise_gap(self):
        config = GenerationConfig(seed=20)
        rng = substream(20, "assemble")
        label = LabelPair(4, 2)
        decomposition = GenusDecomposition((2, 2, 0, 0, 0, 0))
        meshes, _ = assemble_sample(label, decomposition, config, rng)
        boxes = [m.bounds() for m in meshes]
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                lo1, hi1 = boxes[i]
                lo2, hi2 = boxes[j]
                sep = np.maximum(np.maximum(lo2 - hi1, lo1 - hi2), 0.0)
                assert np.linalg.norm(sep) > 0.0


class TestVerifyLabels:
    def test_two_disjoint_tori(self):
        a = supertoroid_mesh(resolution=(16, 16))
        b = TriangleMesh(a.vertices + 10.0, a.triangles)
        report = verify_labels([a, b])
        assert report.beta0_measured == 2
        assert report.genus_total_measured == 2
        assert report.manifold

    def test_sphere_plus_three_torus(self):
        from topobench.geometry import marching_cubes, softmin_field, torus_sdf
        sphere = superellipsoid_mesh(resolution=(16, 16))
        fields = [torus_sdf(center=(i * 1.65, 0, 0), ring_radius=1.0, tube_radius=0.35)
                  for i in range(3)]
        chain = marching_cubes(softmin_field(fields), resolution=96)
        report = verify_labels([sphere, chain])
        assert report.beta0_measured == 2
        assert report.genus_total_measured == 3

    def test_boundary_edge_flags_non_manifold(self):
        mesh = superellipsoid_mesh(resolution=(12, 12))
        broken = TriangleMesh(mesh.vertices, mesh.triangles[1:])
        assert not verify_labels([broken]).manifold

    def test_augmentation_never_changes_report(self):
        config = GenerationConfig(seed=21)
        rng = substream(21, "augment")
        for genus in (0, 1, 2):
            mesh, _ = build_component(genus, config, rng)
            before = verify_labels([mesh])
            t = RigidTwist(rotation=random_rotation(rng),
                           translation=rng.normal(size=3),
                           twist_axis=rng.normal(size=3),
                           twist_rate=float(rng.uniform(-2, 2)))
            after = verify_labels([apply_rigid_twist(mesh, t)])
            assert (before.beta0_measured, before.genus_total_measured, before.manifold) \
                == (after.beta0_measured, after.genus_total_measured, after.manifold)


class TestGenerateDataset:
    def test_manifest_is_byte_identical_across_runs(self, tmp_path):
        config = GenerationConfig(seed=22)
        a_dir = tmp_path / "a"
        b_dir = tmp_path / "b"
        generate_dataset(config, 12, out_dir=a_dir)
        generate_dataset(config, 12, out_dir=b_dir)
        a = (a_dir / "manifest.json").read_bytes()
        b = (b_dir / "manifest.json").read_bytes()
        assert a == b

    def test_balance_and_verification(self, tmp_path):
        config = GenerationConfig(seed=23)
        manifest = generate_dataset(config, 12)
        per_beta = {}
        for s in manifest["samples"]:
            per_beta[s["beta0"]] = per_beta.get(s["beta0"], 0) + 1
            assert s["verification"]["manifold"]
            assert s["verification"]["beta0_measured"] == s["beta0"]
            assert s["verification"]["genus_total_measured"] == s["genus_total"]
        assert set(per_beta.values()) == {2}

    def test_count_divisibility_enforced(self):
        with pytest.raises(InvalidParameterError):
            generate_dataset(GenerationConfig(seed=0), 7)

    def test_written_dataset_reverifies(self, tmp_path):
        from topobench.donut import verify_dataset
        config = GenerationConfig(seed=24)
        generate_dataset(config, 6, out_dir=tmp_path)
        report = verify_dataset(tmp_path)
        assert report["passed"] == report["total"] == 6
