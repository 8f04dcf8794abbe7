"""Vietoris-Rips filtrations of 3D point clouds, up to dimension 2.

An edge enters at its length; a triangle enters at the length of its
longest edge, so face values never exceed coface values by construction.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from ..errors import InvalidParameterError, SizeLimitError
from ..validation import check_point_cloud

POINT_CAP = 2048


@dataclass(frozen=True)
class Filtration:
    """Simplices of a Rips complex in filtration order.

    Edges and triangles are stored sorted by (value, vertex tuple); the
    vertex tuple tiebreak makes the order deterministic.  ``edge_rank``
    maps a sorted vertex pair to the edge's position in ``edges``.
    """

    n_vertices: int
    edges: np.ndarray          # (E, 2) int, filtration order
    edge_values: np.ndarray    # (E,) float
    triangles: np.ndarray      # (T, 3) int, filtration order
    triangle_values: np.ndarray
    max_edge: float
    max_dim: int = 2

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def edge_rank_lookup(self) -> dict:
        return {(int(a), int(b)): r for r, (a, b) in enumerate(self.edges)}


def rips_filtration(cloud, max_edge: float, max_dim: int = 2,
                    point_cap: int = POINT_CAP) -> Filtration:
    """Build the Rips filtration of ``cloud`` with edges up to ``max_edge``.

    ``max_dim=1`` skips triangle enumeration (enough for H0).  Clouds larger
    than ``point_cap`` are refused: Rips complexes grow cubically with the
    point count, which makes them impractical beyond ~10^3 points.
    """
    pts = check_point_cloud(cloud, "cloud")
    if max_edge <= 0:
        raise InvalidParameterError(f"max_edge must be positive, got {max_edge}")
    if max_dim not in (1, 2):
        raise InvalidParameterError(f"max_dim must be 1 or 2, got {max_dim}")
    n = len(pts)
    if n > point_cap:
        raise SizeLimitError(
            f"cloud has {n} points, above the cap of {point_cap}; "
            "Rips filtrations at this size are computationally impractical")

    dist = squareform(pdist(pts))
    iu, ju = np.triu_indices(n, 1)
    lengths = dist[iu, ju]
    keep = lengths <= max_edge
    iu, ju, lengths = iu[keep], ju[keep], lengths[keep]
    order = np.lexsort((ju, iu, lengths))
    edges = np.stack([iu[order], ju[order]], axis=1).astype(np.int64)
    edge_values = lengths[order]

    if max_dim < 2 or len(edges) == 0:
        triangles = np.empty((0, 3), dtype=np.int64)
        tri_values = np.empty(0)
    else:
        adj = dist <= max_edge
        np.fill_diagonal(adj, False)
        tri_list = []
        # for every edge (a, b), collect common neighbours c > b
        for a, b in edges:
            common = np.nonzero(adj[a] & adj[b])[0]
            common = common[common > b]
            if common.size:
                tri_list.append(np.stack(
                    [np.full(common.size, a), np.full(common.size, b), common], axis=1))
        if tri_list:
            tris = np.concatenate(tri_list)
            # the loop above emits (a, b, c) with a < b < c exactly once
            tv = np.maximum(np.maximum(dist[tris[:, 0], tris[:, 1]],
                                       dist[tris[:, 0], tris[:, 2]]),
                            dist[tris[:, 1], tris[:, 2]])
            torder = np.lexsort((tris[:, 2], tris[:, 1], tris[:, 0], tv))
            triangles = tris[torder].astype(np.int64)
            tri_values = tv[torder]
        else:
            triangles = np.empty((0, 3), dtype=np.int64)
            tri_values = np.empty(0)

    return Filtration(n_vertices=n, edges=edges, edge_values=edge_values,
                      triangles=triangles, triangle_values=tri_values,
                      max_edge=float(max_edge), max_dim=max_dim)
