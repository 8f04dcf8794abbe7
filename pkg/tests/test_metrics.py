import numpy as np
import pytest

from oracles import brute_force_bottleneck, brute_force_w2
from topobench.errors import InvalidParameterError
from topobench.metrics import (
    ImageParams,
    PersistenceImager,
    bottleneck,
    chamfer,
    hausdorff,
    image_error,
    persistence_image,
    pie,
    wasserstein2,
)
from topobench.persistence import PersistenceDiagram
from topobench.rng import substream


def _random_diagram(rng, max_points=5):
    m = int(rng.integers(0, max_points + 1))
    b = rng.random(m)
    return np.stack([b, b + rng.random(m) + 1e-3], axis=1) if m else np.empty((0, 2))


class TestWasserstein2:
    def test_identical_diagrams(self):
        rng = substream(0, "w2")
        d = _random_diagram(rng)
        assert wasserstein2(d, d) == 0.0

    def test_single_point_to_empty(self):
        assert wasserstein2(np.array([[0.0, 1.0]]), np.empty((0, 2))) == \
            pytest.approx(np.sqrt(0.5))

    def test_matches_brute_force(self):
        rng = substream(1, "w2")
        for _ in range(60):
            d1 = _random_diagram(rng)
            d2 = _random_diagram(rng)
            assert wasserstein2(d1, d2) == pytest.approx(
                brute_force_w2(d1, d2), abs=1e-10)

    def test_symmetry_and_triangle_inequality(self):
        rng = substream(2, "w2")
        for _ in range(60):
            a, b, c = (_random_diagram(rng, 8) for _ in range(3))
            assert wasserstein2(a, b) == wasserstein2(b, a)
            assert wasserstein2(a, c) <= wasserstein2(a, b) + wasserstein2(b, c) + 1e-9

    def test_on_diagonal_points_are_free(self):
        rng = substream(3, "w2")
        d1 = _random_diagram(rng, 4)
        d2 = _random_diagram(rng, 4)
        with_diag = np.concatenate([d1, [[0.4, 0.4]]])
        assert wasserstein2(with_diag, d2) == pytest.approx(wasserstein2(d1, d2), abs=1e-12)


class TestBottleneck:
    def test_identical_diagrams(self):
        rng = substream(4, "db")
        d = _random_diagram(rng)
        assert bottleneck(d, d) == 0.0

    def test_single_pair_shift(self):
        assert bottleneck(np.array([[0.0, 1.0]]), np.array([[0.0, 1.2]])) == \
            pytest.approx(0.2)

    def test_matches_brute_force(self):
        rng = substream(5, "db")
        for _ in range(60):
            d1 = _random_diagram(rng)
            d2 = _random_diagram(rng)
            assert bottleneck(d1, d2) == pytest.approx(
                brute_force_bottleneck(d1, d2), abs=1e-12)

    def test_symmetry_and_triangle_inequality(self):
        rng = substream(6, "db")
        for _ in range(60):
            a, b, c = (_random_diagram(rng, 8) for _ in range(3))
            assert bottleneck(a, b) == bottleneck(b, a)
            assert bottleneck(a, c) <= bottleneck(a, b) + bottleneck(b, c) + 1e-9

    def test_on_diagonal_points_are_free(self):
        rng = substream(7, "db")
        d1 = _random_diagram(rng, 4)
        d2 = _random_diagram(rng, 4)
        with_diag = np.concatenate([d1, [[0.8, 0.8]]])
        assert bottleneck(with_diag, d2) == pytest.approx(bottleneck(d1, d2), abs=1e-12)


class TestPersistenceImage:
    def test_empty_diagram_gives_zero_image(self):
        img = persistence_image(np.empty((0, 2)))
        assert np.all(img.values == 0.0)

    def test_small_bandwidth_concentrates_mass(self):
        params = ImageParams(resolution=10, bandwidth=0.005)
        img = persistence_image(np.array([[0.25, 0.80]]), params).values
        # birth 0.25 -> cell 2, persistence 0.55 -> cell 5
        assert img[2, 5] == img.max()
        assert img[2, 5] > 0.99 * img.sum()

    def test_linear_in_duplicated_pairs(self):
        params = ImageParams(resolution=20, bandwidth=0.05)
        one = persistence_image(np.array([[0.3, 0.6]]), params).values
        two = persistence_image(np.array([[0.3, 0.6], [0.3, 0.6]]), params).values
        assert np.allclose(two, 2 * one)

    def test_unscaled_coordinates_rejected(self):
        with pytest.raises(InvalidParameterError):
            persistence_image(np.array([[0.0, 2.0]]))

    def test_transformer_shape(self):
        diagrams = [PersistenceDiagram(1, [[0.1, 0.5]]),
                    PersistenceDiagram(1, np.empty((0, 2)))]
        out = PersistenceImager(resolution=16, bandwidth=0.1).fit_transform(diagrams)
        assert out.shape == (2, 256)


class TestPie:
    def test_identical_diagrams(self):
        d = np.array([[0.2, 0.8], [0.1, 0.3]])
        assert pie(d, d) == 0.0

    def test_empty_prediction(self):
        d = np.array([[0.2, 0.9]])
        params = ImageParams(resolution=30, bandwidth=0.05)
        expected = float(np.sum(persistence_image(d, params).values ** 2))
        assert pie(np.empty((0, 2)), d, params) == pytest.approx(expected)

    def test_near_diagonal_pair_strictly_increases_error(self):
        params = ImageParams(resolution=30, bandwidth=0.05)
        true = np.array([[0.2, 0.9]])
        pred = np.array([[0.2, 0.9]])
        noisy = np.concatenate([pred, [[0.5, 0.52]]])
        assert pie(pred, true, params) == 0.0
        assert pie(noisy, true, params) > 0.0

    def test_mismatched_params_rejected(self):
        d = np.array([[0.2, 0.8]])
        img_a = persistence_image(d, ImageParams(resolution=10, bandwidth=0.05))
        img_b = persistence_image(d, ImageParams(resolution=12, bandwidth=0.05))
        with pytest.raises(InvalidParameterError):
            image_error(img_a, img_b)


class TestCloudDistances:
    def test_identical_clouds(self):
        rng = substream(8, "cloud")
        x = rng.random((20, 3))
        assert hausdorff(x, x) == 0.0
        assert chamfer(x, x) == 0.0

    def test_two_singletons(self):
        x = np.array([[0.0, 0, 0]])
        y = np.array([[1.0, 0, 0]])
        assert hausdorff(x, y) == pytest.approx(1.0)
        assert chamfer(x, y) == pytest.approx(1.0)

    def test_hausdorff_bounded_by_scaled_chamfer(self):
        rng = substream(9, "cloud")
        n = 64
        for _ in range(200):
            x = rng.random((n, 3))
            y = rng.random((n, 3))
            assert hausdorff(x, y) <= n * chamfer(x, y) + 1e-9

    def test_empty_rejected(self):
        with pytest.raises(InvalidParameterError):
            hausdorff(np.empty((0, 3)), np.array([[0.0, 0, 0]]))
