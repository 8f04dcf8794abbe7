"""Point-cloud discrepancy measures: Hausdorff and Chamfer distances."""

from scipy.spatial import cKDTree

from ..validation import check_point_cloud


def _directed_nn(x, y):
    tree = cKDTree(y)
    dist, _ = tree.query(x, k=1)
    return dist


def hausdorff(x, y) -> float:
    """Symmetric Hausdorff distance: max over both directed max-min
    distances."""
    x = check_point_cloud(x, "x")
    y = check_point_cloud(y, "y")
    return float(max(_directed_nn(x, y).max(), _directed_nn(y, x).max()))


def chamfer(x, y) -> float:
    """Mean Chamfer distance: the two directed mean nearest-neighbour
    distances, averaged."""
    x = check_point_cloud(x, "x")
    y = check_point_cloud(y, "y")
    return float(0.5 * (_directed_nn(x, y).mean() + _directed_nn(y, x).mean()))
