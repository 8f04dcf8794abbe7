"""Persistence computation by Z/2 boundary-matrix reduction.

Dimensions are processed in decreasing order (the twist/clearing schedule):
triangle columns are reduced against edge rows to produce the H1 pairing,
which marks every paired edge as a known cycle-creator; the dimension-1
pairing itself collapses to elder-rule union-find, since every reduced edge
column has exactly two entries.  Columns are stored as Python integers used
as bitsets over edge ranks, so column additions are single XORs.
"""

import numpy as np

from ..errors import InvalidParameterError
from .diagram import PersistenceDiagram
from .rips import Filtration


def _union_find_pairs(filtration: Filtration):
    """Elder-rule merge pairing over the edge sequence.

    Returns (deaths, tree_edge_mask, n_components): one death value per
    finite H0 bar, a boolean mask flagging edges that merge two components
    (negative edges), and the final component count.
    """
    n = filtration.n_vertices
    parent = np.arange(n)
    # path-halving find
    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    deaths = []
    tree = np.zeros(filtration.n_edges, dtype=bool)
    for rank, ((a, b), val) in enumerate(zip(filtration.edges, filtration.edge_values)):
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        tree[rank] = True
        parent[max(ra, rb)] = min(ra, rb)
        deaths.append(val)
    components = len({int(find(i)) for i in range(n)})
    return np.asarray(deaths), tree, components


def _reduce_triangle_columns(filtration: Filtration):
    """Column reduction of the triangle boundary matrix.

    Yields (edge_rank, triangle_index) pivot pairs in filtration order.
    """
    rank_of = filtration.edge_rank_lookup()
    tris = filtration.triangles
    pairs = []
    pivot_owner = {}
    columns = {}
    for j in range(len(tris)):
        a, b, c = (int(v) for v in tris[j])
        col = ((1 << rank_of[(a, b)])
               | (1 << rank_of[(a, c)])
               | (1 << rank_of[(b, c)]))
        while col:
            pivot = col.bit_length() - 1
            owner = pivot_owner.get(pivot)
            if owner is None:
                pivot_owner[pivot] = j
                columns[j] = col
                pairs.append((pivot, j))
                break
            col ^= columns[owner]
    return pairs


def compute_persistence(filtration: Filtration, q: int) -> PersistenceDiagram:
    """Persistence diagram of the filtration in dimension ``q`` (0 or 1).

    Essential classes are reported with death equal to the filtration's
    ``max_edge`` and flagged; zero-persistence pairs are dropped.  H1 needs
    a filtration built with ``max_dim=2``.
    """
    if q not in (0, 1):
        raise InvalidParameterError(f"supported dimensions are 0 and 1, got {q}")
    if q == 1 and filtration.max_dim < 2:
        raise InvalidParameterError("H1 needs a filtration built with max_dim=2")
    cap = filtration.max_edge
    prov = {"filtration": "vietoris-rips", "n_points": filtration.n_vertices,
            "max_edge": cap}

    if q == 0:
        deaths, _, n_components = _union_find_pairs(filtration)
        deaths = deaths[deaths > 0]  # drop zero-persistence merges
        finite = np.stack([np.zeros_like(deaths), deaths], axis=1) if deaths.size \
            else np.empty((0, 2))
        ess = np.tile([0.0, cap], (n_components, 1))
        pairs = np.concatenate([finite, ess]) if n_components else finite
        flags = np.zeros(len(pairs), dtype=bool)
        flags[len(finite):] = True
        return PersistenceDiagram(0, pairs, essential=flags, provenance=prov)

    _, tree, _ = _union_find_pairs(filtration)
    cycle_edges = set(np.nonzero(~tree)[0].tolist())
    rows, values = [], filtration.edge_values
    for edge_rank, tri_idx in _reduce_triangle_columns(filtration):
        cycle_edges.discard(edge_rank)
        birth = values[edge_rank]
        death = filtration.triangle_values[tri_idx]
        if death > birth:
            rows.append((birth, death))
    finite = np.asarray(rows, dtype=np.float64).reshape(-1, 2)
    ess_births = np.sort(values[sorted(cycle_edges)]) if cycle_edges else np.empty(0)
    ess = np.stack([ess_births, np.full(ess_births.size, cap)], axis=1) if ess_births.size \
        else np.empty((0, 2))
    pairs = np.concatenate([finite, ess])
    flags = np.zeros(len(pairs), dtype=bool)
    flags[len(finite):] = True
    return PersistenceDiagram(1, pairs, essential=flags, provenance=prov)
