"""Dataset-level evaluation of predicted diagrams against ground truth."""

import numpy as np

from ..errors import InvalidParameterError
from ..metrics.images import ImageParams, pie
from ..metrics.wasserstein import bottleneck, wasserstein2


def evaluate(pred_diagrams, true_diagrams, image_params: ImageParams = ImageParams()):
    """Per-sample W2, bottleneck and PIE, aggregated by arithmetic mean.

    The caller must pass existence-thresholded predictions: the PIE counts
    every pair, including ones hugging the diagonal.  Returns a dict with
    ``per_sample`` rows and the three means.
    """
    pred = list(pred_diagrams)
    true = list(true_diagrams)
    if len(pred) != len(true):
        raise InvalidParameterError(
            f"prediction and truth counts differ: {len(pred)} vs {len(true)}")
    rows = []
    for p, t in zip(pred, true):
        rows.append({
            "w2": wasserstein2(p, t),
            "bottleneck": bottleneck(p, t),
            "pie": pie(p, t, image_params),
        })
    return {
        "per_sample": rows,
        "mean_w2": float(np.mean([r["w2"] for r in rows])) if rows else 0.0,
        "mean_bottleneck": float(np.mean([r["bottleneck"] for r in rows])) if rows else 0.0,
        "mean_pie": float(np.mean([r["pie"] for r in rows])) if rows else 0.0,
    }
