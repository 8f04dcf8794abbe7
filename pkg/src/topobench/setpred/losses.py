"""Matching-based training objective for diagram set prediction.

A prediction set of N candidate pairs with existence logits is matched to
the M <= N target pairs by minimum-cost assignment; the loss combines a
reconstruction term over matched pairs, a binary-cross-entropy existence
term over all logits, and a diagonal regularizer over unmatched pairs.
Analytic gradients treat the assignment as locally constant, the standard
convention for matching losses.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import CapacityExceededError, InvalidParameterError
from ..validation import check_pairs
from .assignment import Assignment, hungarian


def sigmoid(x):
    """Numerically stable logistic function."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def log_sigmoid(x):
    """log(sigmoid(x)) evaluated without overflow."""
    x = np.asarray(x, dtype=np.float64)
    return -np.logaddexp(0.0, -x)


@dataclass(frozen=True)
class LossWeights:
    """Coefficients of the total loss and of the matching cost."""

    mu_recon: float = 1.0
    mu_exist: float = 0.1
    mu_diag: float = 0.1
    lambda_reg: float = 1.0
    lambda_exist: float = 0.1

    def __post_init__(self):
        for name in ("mu_recon", "mu_exist", "mu_diag", "lambda_reg", "lambda_exist"):
            if getattr(self, name) < 0:
                raise InvalidParameterError(f"{name} must be >= 0")


@dataclass(frozen=True)
class PredictionSet:
    """N candidate (birth, death) pairs with existence logits."""

    pairs: np.ndarray
    logits: np.ndarray

    def __post_init__(self):
        pairs = check_pairs(self.pairs, "pairs")
        logits = np.asarray(self.logits, dtype=np.float64).reshape(-1)
        if len(logits) != len(pairs):
            raise InvalidParameterError("logits must align with pairs")
        if np.any(pairs[:, 1] <= pairs[:, 0]):
            raise InvalidParameterError("prediction pairs must satisfy death > birth")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "logits", logits)

    def __len__(self) -> int:
        return len(self.pairs)

    def existence_probabilities(self) -> np.ndarray:
        return sigmoid(self.logits)

    def thresholded_pairs(self, threshold: float = 0.5) -> np.ndarray:
        return self.pairs[self.existence_probabilities() >= threshold]


def _as_pred(pred):
    """Accept a PredictionSet or a raw (pairs, logits) tuple."""
    if isinstance(pred, PredictionSet):
        return pred.pairs, pred.logits
    pairs, logits = pred
    return (np.asarray(pairs, dtype=np.float64).reshape(-1, 2),
            np.asarray(logits, dtype=np.float64).reshape(-1))


def _as_target(target):
    if hasattr(target, "pairs"):
        return np.asarray(target.pairs, dtype=np.float64).reshape(-1, 2)
    return check_pairs(target, "target")


def match_cost(pred, target, weights: LossWeights = LossWeights()) -> np.ndarray:
    """M x N matching-cost matrix; rows are targets, columns predictions.

    cost[j, i] = lambda_reg * ||pred_i - target_j||^2
               + lambda_exist * (1 - sigmoid(logit_i))
    """
    pairs, logits = _as_pred(pred)
    tgt = _as_target(target)
    m, n = len(tgt), len(pairs)
    if m > n:
        raise CapacityExceededError(f"target has {m} pairs but only {n} predictions")
    diff = tgt[:, None, :] - pairs[None, :, :]
    sq = np.einsum("mnk,mnk->mn", diff, diff)
    penalty = 1.0 - sigmoid(logits)
    return weights.lambda_reg * sq + weights.lambda_exist * penalty[None, :]


def loss_recon(pred, target, assignment: Assignment) -> float:
    """Mean squared error over matched pairs; 0 for an empty target."""
    pairs, _ = _as_pred(pred)
    tgt = _as_target(target)
    m = len(tgt)
    if m == 0:
        return 0.0
    diff = pairs[assignment.target_to_pred] - tgt
    return float(np.sum(diff * diff) / m)


def loss_exist(logits, assignment: Assignment) -> float:
    """Binary cross entropy of existence logits against the matching."""
    logits = np.asarray(logits, dtype=np.float64).reshape(-1)
    n = len(logits)
    labels = np.zeros(n)
    labels[assignment.target_to_pred] = 1.0
    ll = labels * log_sigmoid(logits) + (1.0 - labels) * log_sigmoid(-logits)
    return float(-ll.sum() / n)


def loss_diag(pred, assignment: Assignment) -> float:
    """Mean squared distance-to-diagonal gap of unmatched predictions."""
    pairs, _ = _as_pred(pred)
    unmatched = assignment.unmatched
    if len(unmatched) == 0:
        return 0.0
    gap = pairs[unmatched, 1] - pairs[unmatched, 0]
    return float(np.mean(gap * gap))


@dataclass(frozen=True)
class LossBreakdown:
    total: float
    recon: float
    exist: float
    diag: float
    assignment: Assignment


def total_loss(pred, target, weights: LossWeights = LossWeights()) -> LossBreakdown:
    """Match, then combine the three loss terms with their weights."""
    cost = match_cost(pred, target, weights)
    assignment = hungarian(cost)
    _, logits = _as_pred(pred)
    recon = loss_recon(pred, target, assignment)
    exist = loss_exist(logits, assignment)
    diag = loss_diag(pred, assignment)
    total = weights.mu_recon * recon + weights.mu_exist * exist + weights.mu_diag * diag
    return LossBreakdown(total, recon, exist, diag, assignment)


def loss_gradients(pred, target, weights: LossWeights = LossWeights(),
                   assignment: Assignment = None):
    """Analytic partials of the total loss w.r.t. births, deaths, logits.

    The assignment is held fixed (computed first if not supplied), so the
    gradients are those of the piecewise-smooth objective on its current
    piece.  Returns a dict with 'births', 'deaths', 'logits' arrays.
    """
    pairs, logits = _as_pred(pred)
    tgt = _as_target(target)
    if assignment is None:
        assignment = hungarian(match_cost(pred, target, weights))
    n = len(pairs)
    m = len(tgt)
    g_b = np.zeros(n)
    g_d = np.zeros(n)
    g_l = np.zeros(n)

    if m > 0:
        cols = assignment.target_to_pred
        diff = pairs[cols] - tgt  # (M, 2)
        coeff = weights.mu_recon * 2.0 / m
        np.add.at(g_b, cols, coeff * diff[:, 0])
        np.add.at(g_d, cols, coeff * diff[:, 1])

    labels = np.zeros(n)
    if m > 0:
        labels[assignment.target_to_pred] = 1.0
    g_l += weights.mu_exist * (sigmoid(logits) - labels) / n

    unmatched = assignment.unmatched
    if len(unmatched):
        gap = pairs[unmatched, 1] - pairs[unmatched, 0]
        coeff = weights.mu_diag * 2.0 / len(unmatched)
        g_d[unmatched] += coeff * gap
        g_b[unmatched] -= coeff * gap
    return {"births": g_b, "deaths": g_d, "logits": g_l}
