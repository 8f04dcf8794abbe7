"""Linear centered kernel alignment and the index-permutation ablation."""

import numpy as np

from ..errors import InvalidParameterError, UndefinedSimilarityError
from ..rng import substream
from ..validation import check_matrix


def linear_cka(a, b) -> float:
    """Linear CKA between two representations of the same samples.

    Computed as ||Ac^T Bc||_F^2 / (||Ac^T Ac||_F ||Bc^T Bc||_F) with
    column-centered inputs, which avoids forming n x n Gram matrices.
    """
    a = check_matrix(a, "a", min_rows=3)
    b = check_matrix(b, "b", min_rows=3)
    if a.shape[0] != b.shape[0]:
        raise InvalidParameterError(
            f"row counts must match, got {a.shape[0]} and {b.shape[0]}")
    ac = a - a.mean(axis=0)
    bc = b - b.mean(axis=0)
    cross = np.linalg.norm(ac.T @ bc) ** 2
    na = np.linalg.norm(ac.T @ ac)
    nb = np.linalg.norm(bc.T @ bc)
    if na == 0 or nb == 0:
        raise UndefinedSimilarityError("CKA is undefined for zero-variance input")
    return float(cross / (na * nb))


def _subset_derangement(n_rows: int, alpha: float, rng) -> np.ndarray:
    """Permutation of range(n_rows) deranging a random floor(alpha * n)
    subset; subsets smaller than 2 cannot be deranged and give identity."""
    perm = np.arange(n_rows)
    m = int(np.floor(alpha * n_rows))
    if m < 2:
        return perm
    subset = rng.choice(n_rows, size=m, replace=False)
    while True:
        shuffled = rng.permutation(subset)
        if not np.any(shuffled == subset):
            break
    perm[subset] = shuffled
    return perm


def permutation_ablation(a, b, alpha: float, seed: int = 0, repeats: int = 3) -> float:
    """Mean CKA after mismatching a fraction ``alpha`` of the rows of
    ``a``, averaged over ``repeats`` random subsets."""
    if not 0.0 <= alpha <= 1.0:
        raise InvalidParameterError(f"alpha must lie in [0, 1], got {alpha}")
    a = check_matrix(a, "a", min_rows=3)
    b = check_matrix(b, "b", min_rows=3)
    scores = []
    for r in range(repeats):
        rng = substream(seed, "cka-ablation", r)
        perm = _subset_derangement(a.shape[0], alpha, rng)
        scores.append(linear_cka(a[perm], b))
    return float(np.mean(scores))


def hsic_naive(a, b) -> float:
    """Reference HSIC by the direct double-centered Gram contraction.

    Kept quadratic in n on purpose: it is the independent oracle for
    :func:`linear_cka` in the tests.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n = a.shape[0]
    ka = a @ a.T
    kb = b @ b.T
    h = np.eye(n) - np.ones((n, n)) / n
    return float(np.sum((h @ ka @ h) * (h @ kb @ h)))
