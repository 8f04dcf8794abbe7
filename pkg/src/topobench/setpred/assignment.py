"""Minimum-cost bipartite assignment (Hungarian algorithm).

One shared solver backs both the set-prediction matching and the exact
Wasserstein distance.  The implementation is the shortest-augmenting-path
variant with potentials; rows are processed in order and column scans
prefer the lowest index, so ties resolve deterministically.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import CapacityExceededError, InvalidParameterError


@dataclass(frozen=True)
class Assignment:
    """Injective map from target (row) indices to prediction (column)
    indices, with the matched / unmatched column partition."""

    target_to_pred: np.ndarray   # (M,) column index per row
    n_columns: int
    total_cost: float

    @property
    def matched(self) -> np.ndarray:
        return np.sort(self.target_to_pred)

    @property
    def unmatched(self) -> np.ndarray:
        mask = np.ones(self.n_columns, dtype=bool)
        mask[self.target_to_pred] = False
        return np.nonzero(mask)[0]


def hungarian(cost) -> Assignment:
    """Solve min sum_i cost[i, pi(i)] over injections of rows into columns.

    Requires rows <= columns and finite entries.
    """
    C = np.asarray(cost, dtype=np.float64)
    if C.ndim != 2:
        raise InvalidParameterError(f"cost must be a matrix, got ndim={C.ndim}")
    M, N = C.shape
    if M > N:
        raise CapacityExceededError(f"{M} rows cannot be assigned to {N} columns")
    if not np.all(np.isfinite(C)):
        raise InvalidParameterError("cost matrix contains non-finite entries")
    if M == 0:
        return Assignment(np.empty(0, dtype=np.int64), N, 0.0)

    # potentials; p[j] is the 1-based row matched to column j (0 = free)
    u = np.zeros(M + 1)
    v = np.zeros(N + 1)
    p = np.zeros(N + 1, dtype=np.int64)
    way = np.zeros(N + 1, dtype=np.int64)
    for i in range(1, M + 1):
        p[0] = i
        j0 = 0
        minv = np.full(N + 1, np.inf)
        used = np.zeros(N + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = p[j0]
            free = ~used[1:]
            cur = C[i0 - 1] - u[i0] - v[1:]
            improve = free & (cur < minv[1:])
            idx = np.nonzero(improve)[0]
            minv[idx + 1] = cur[idx]
            way[idx + 1] = j0
            masked = np.where(free, minv[1:], np.inf)
            j1 = int(np.argmin(masked)) + 1
            delta = masked[j1 - 1]
            used_cols = np.nonzero(used)[0]
            u[p[used_cols]] += delta
            v[used_cols] -= delta
            minv[1:][free] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0 != 0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1

    col_of = np.empty(M, dtype=np.int64)
    for j in range(1, N + 1):
        if p[j] > 0:
            col_of[p[j] - 1] = j - 1
    total = float(C[np.arange(M), col_of].sum())
    return Assignment(col_of, N, total)
