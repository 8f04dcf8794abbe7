"""Topological label sampling and genus decomposition.

Labels are (number of components, total genus) pairs drawn so that every
component count appears equally often and, within each count, the total
genus is uniform over its feasible range.  A label's total genus is then
split across components by enumerating all decompositions and picking one
uniformly.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameterError
from ..rng import substream


@dataclass(frozen=True)
class LabelPair:
    beta0: int
    genus_total: int

    def __post_init__(self):
        if self.beta0 < 1:
            raise InvalidParameterError(f"beta0 must be >= 1, got {self.beta0}")
        if self.genus_total < 0:
            raise InvalidParameterError(f"genus_total must be >= 0, got {self.genus_total}")


@dataclass(frozen=True)
class GenusDecomposition:
    """counts[j] components of genus j; sums tie it to a LabelPair."""

    counts: tuple

    @property
    def n_components(self) -> int:
        return sum(self.counts)

    @property
    def genus_total(self) -> int:
        return sum(j * c for j, c in enumerate(self.counts))

    def genus_list(self):
        """Per-component genera, descending."""
        out = []
        for j in range(len(self.counts) - 1, -1, -1):
            out.extend([j] * self.counts[j])
        return out


@dataclass(frozen=True)
class GenerationConfig:
    """Hyperparameters of the benchmark generator.

    The label-sampling block (g_max, G_max, beta0 range, k_replicates)
    follows the published defaults; shape ranges, placement and
    isosurface settings are exposed here because no reference values
    exist for them.
    """

    g_max: int = 5
    G_max: int = 10
    beta0_min: int = 1
    beta0_max: int = 6
    k_replicates: int = 1000
    seed: int = 0
    # mixture weights over shape families
    p_superellipsoid: float = 0.7      # genus 0: rest are cones
    p_supertoroid: float = 0.5         # genus 1: rest are implicit tori
    # shape parameter ranges
    superellipsoid_scale_range: tuple = (0.5, 1.0)
    exponent_range: tuple = (0.3, 1.8)
    cone_radius_range: tuple = (0.4, 1.0)
    cone_height_range: tuple = (0.5, 1.5)
    toroid_ring_range: tuple = (1.6, 3.0)
    torus_ring_range: tuple = (0.8, 1.2)
    torus_tube_fraction_range: tuple = (0.30, 0.45)
    twist_rate_range: tuple = (-0.5, 0.5)   # fraction of a full turn per unit height
    # parametric mesh resolution
    mesh_resolution: int = 32
    cone_segments: int = 32
    # implicit-surface extraction
    softmin_sharpness: float = 32.0
    mc_resolution: int = 96
    # placement
    min_gap_fraction: float = 0.05
    placement_attempts: int = 200
    max_sample_retries: int = 20

    def __post_init__(self):
        if self.beta0_min > self.beta0_max or self.beta0_min < 1:
            raise InvalidParameterError("need 1 <= beta0_min <= beta0_max")
        if self.g_max > self.G_max:
            raise InvalidParameterError("need g_max <= G_max")


def sample_labels(config: GenerationConfig, k_replicates: int = None):
    """Draw the label multiset: each component count k_replicates times,
    total genus uniform on its feasible range by rejection.

    Deterministic for a fixed config seed.
    """
    k = config.k_replicates if k_replicates is None else int(k_replicates)
    if k < 1:
        raise InvalidParameterError(f"k_replicates must be >= 1, got {k}")
    rng = substream(config.seed, "labels")
    labels = []
    for beta0 in range(config.beta0_min, config.beta0_max + 1):
        cap = min(config.G_max, beta0 * config.g_max)
        for _ in range(k):
            while True:
                s = int(rng.integers(0, config.G_max + 1))
                if s <= cap:
                    break
            labels.append(LabelPair(beta0, s))
    return labels


def enumerate_genus_decompositions(beta0: int, genus_total: int, g_max: int):
    """All count vectors x with sum(x) = beta0 and sum(j * x[j]) =
    genus_total, x[j] >= 0 for j in [0, g_max].  Returned in the
    deterministic order the backtracking search emits."""
    if beta0 < 1:
        raise InvalidParameterError(f"beta0 must be >= 1, got {beta0}")
    solutions = []
    if genus_total < 0 or genus_total > g_max * beta0:
        return solutions

    def backtrack(remaining_count, remaining_sum, j, prefix):
        if j > g_max:
            if remaining_count == 0 and remaining_sum == 0:
                solutions.append(GenusDecomposition(tuple(prefix)))
            return
        if j == 0:
            upper = remaining_count
        else:
            upper = min(remaining_count, remaining_sum // j)
        for n_j in range(upper + 1):
            prefix.append(n_j)
            backtrack(remaining_count - n_j, remaining_sum - j * n_j, j + 1, prefix)
            prefix.pop()

    backtrack(beta0, genus_total, 0, [])
    return solutions


def choose_decomposition(label: LabelPair, config: GenerationConfig,
                         rng: np.random.Generator) -> GenusDecomposition:
    """Uniform choice among all decompositions of a label."""
    solutions = enumerate_genus_decompositions(label.beta0, label.genus_total,
                                               config.g_max)
    if not solutions:
        raise InvalidParameterError(f"label {label} admits no decomposition")
    return solutions[int(rng.integers(len(solutions)))]
