"""Optimal-transport distances between persistence diagrams.

Both distances allow unmatched points to travel to their orthogonal
projection on the diagonal.  The 2-Wasserstein distance is computed
exactly by assignment on the augmented (m+n) x (m+n) cost matrix; the
bottleneck distance by binary search over candidate costs with a
bipartite-feasibility test.
"""

import numpy as np

from ..setpred.assignment import hungarian
from ..validation import check_pairs


def _coords(diagram) -> np.ndarray:
    if hasattr(diagram, "pairs"):
        return np.asarray(diagram.pairs, dtype=np.float64).reshape(-1, 2)
    return check_pairs(diagram, "diagram")


def _canonical_pair(p, q):
    """Deterministic argument order so the distance is exactly symmetric:
    both call orders build the identical cost matrix."""
    kp = (len(p), p[np.lexsort(p.T)].tobytes())
    kq = (len(q), q[np.lexsort(q.T)].tobytes())
    return (q, p) if kq < kp else (p, q)


def wasserstein2(d1, d2) -> float:
    """2-Wasserstein distance with squared-Euclidean ground cost.

    Points may be matched across diagrams or to the diagonal; the distance
    is the square root of the minimal total squared cost.  The augmented
    matrix gives every real point access to every diagonal slot at its own
    projection cost, which leaves the optimum unchanged and keeps all
    entries finite.
    """
    p, q = _canonical_pair(_coords(d1), _coords(d2))
    m, n = len(p), len(q)
    if m == 0 and n == 0:
        return 0.0
    diag_p = 0.5 * (p[:, 1] - p[:, 0]) ** 2
    diag_q = 0.5 * (q[:, 1] - q[:, 0]) ** 2
    size = m + n
    cost = np.zeros((size, size))
    if m and n:
        diff = p[:, None, :] - q[None, :, :]
        cost[:m, :n] = np.einsum("mnk,mnk->mn", diff, diff)
    if m:
        cost[:m, n:] = diag_p[:, None]
    if n:
        cost[m:, :n] = diag_q[None, :]
    result = hungarian(cost)
    return float(np.sqrt(max(result.total_cost, 0.0)))


def _feasible(threshold, real_cost, diag_p, diag_q) -> bool:
    """Perfect matching test on the augmented graph at a given threshold.

    Left nodes are the m real points of the first diagram plus n diagonal
    slots; right nodes the n points of the second plus m slots.  An edge is
    allowed when its L-infinity cost is within the threshold;
    diagonal-to-diagonal edges are free.
    """
    eps = 1e-12
    m, n = real_cost.shape
    size = m + n
    match_r = [-1] * size

    def adjacency(i):
        if i < m:
            cols = [int(j) for j in np.nonzero(real_cost[i] <= threshold + eps)[0]]
            if diag_p[i] <= threshold + eps:
                cols.append(n + i)
            return cols
        jq = i - m
        cols = [jq] if diag_q[jq] <= threshold + eps else []
        cols.extend(range(n, size))
        return cols

    def augment(i, visited):
        for j in adjacency(i):
            if j in visited:
                continue
            visited.add(j)
            if match_r[j] == -1 or augment(match_r[j], visited):
                match_r[j] = i
                return True
        return False

    for i in range(size):
        if not augment(i, set()):
            return False
    return True


def bottleneck(d1, d2) -> float:
    """Bottleneck distance: minimal worst-pair L-infinity matching cost."""
    p, q = _canonical_pair(_coords(d1), _coords(d2))
    m, n = len(p), len(q)
    if m == 0 and n == 0:
        return 0.0
    diag_p = 0.5 * np.abs(p[:, 1] - p[:, 0]) if m else np.empty(0)
    diag_q = 0.5 * np.abs(q[:, 1] - q[:, 0]) if n else np.empty(0)
    real = np.abs(p[:, None, :] - q[None, :, :]).max(axis=2) if (m and n) \
        else np.empty((m, n))
    candidates = np.unique(np.concatenate([[0.0], diag_p, diag_q, real.ravel()]))
    lo, hi = 0, len(candidates) - 1
    # the largest candidate is always feasible: everything reaches everything
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(candidates[mid], real, diag_p, diag_q):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])
