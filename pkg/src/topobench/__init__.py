"""topobench: topological benchmark generation, persistence diagrams of
point clouds, diagram metrics and vectorizations, set-prediction losses,
and a forward-only diagram decoder."""

__version__ = "0.1.0"

from . import align, decoder, donut, geometry, metrics, persistence, setpred

__all__ = [
    "geometry",
    "donut",
    "persistence",
    "metrics",
    "align",
    "setpred",
    "decoder",
    "__version__",
]
