from .diagram import PersistenceDiagram, load_diagram_csv, save_diagram_csv
from .pipeline import (
    DiagramQuantileThreshold,
    DiagramScaler,
    VietorisRipsPersistence,
    quantile_threshold,
    scale_dataset,
)
from .reduction import compute_persistence
from .rips import POINT_CAP, Filtration, rips_filtration

__all__ = [
    "PersistenceDiagram",
    "Filtration",
    "rips_filtration",
    "compute_persistence",
    "quantile_threshold",
    "scale_dataset",
    "VietorisRipsPersistence",
    "DiagramQuantileThreshold",
    "DiagramScaler",
    "save_diagram_csv",
    "load_diagram_csv",
    "POINT_CAP",
]
