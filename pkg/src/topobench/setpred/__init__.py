from .assignment import Assignment, hungarian
from .losses import (
    LossBreakdown,
    LossWeights,
    PredictionSet,
    log_sigmoid,
    loss_diag,
    loss_exist,
    loss_gradients,
    loss_recon,
    match_cost,
    sigmoid,
    total_loss,
)

__all__ = [
    "Assignment",
    "hungarian",
    "LossWeights",
    "PredictionSet",
    "LossBreakdown",
    "match_cost",
    "loss_recon",
    "loss_exist",
    "loss_diag",
    "total_loss",
    "loss_gradients",
    "sigmoid",
    "log_sigmoid",
]
