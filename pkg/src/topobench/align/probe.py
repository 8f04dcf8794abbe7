"""Linear probing of ingested features with k-fold cross-validation.

The probe is a single linear map trained with softmax cross-entropy by
full-batch gradient descent on standardized features; deliberately free of
optimizer state so runs are reproducible bit-for-bit from the seed.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError
from sklearn.model_selection import KFold

from ..errors import InvalidParameterError
from ..validation import check_matrix


@dataclass(frozen=True)
class ProbeConfig:
    n_classes: int
    folds: int = 5
    steps: int = 500
    learning_rate: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.folds < 2:
            raise InvalidParameterError(f"folds must be >= 2, got {self.folds}")
        if self.n_classes < 2:
            raise InvalidParameterError(f"n_classes must be >= 2, got {self.n_classes}")


class LinearProbe(BaseEstimator, ClassifierMixin):
    """Multinomial logistic regression trained by plain gradient descent."""

    def __init__(self, n_classes=2, steps=500, learning_rate=0.1):
        self.n_classes = n_classes
        self.steps = steps
        self.learning_rate = learning_rate

    def _standardize(self, X):
        return (X - self.mean_) / self.std_

    def fit(self, X, y):
        X = check_matrix(X, "X")
        y = np.asarray(y, dtype=np.int64)
        if y.min() < 0 or y.max() >= self.n_classes:
            raise InvalidParameterError("labels out of range for n_classes")
        self.mean_ = X.mean(axis=0)
        self.std_ = X.std(axis=0)
        self.std_[self.std_ == 0] = 1.0
        Xs = self._standardize(X)
        n, d = Xs.shape
        onehot = np.zeros((n, self.n_classes))
        onehot[np.arange(n), y] = 1.0
        W = np.zeros((d, self.n_classes))
        b = np.zeros(self.n_classes)
        self.losses_ = []
        for _ in range(self.steps):
            logits = Xs @ W + b
            logits -= logits.max(axis=1, keepdims=True)
            expl = np.exp(logits)
            prob = expl / expl.sum(axis=1, keepdims=True)
            self.losses_.append(float(-np.mean(
                np.log(prob[np.arange(n), y] + 1e-300))))
            grad = (prob - onehot) / n
            W -= self.learning_rate * (Xs.T @ grad)
            b -= self.learning_rate * grad.sum(axis=0)
        self.coef_ = W
        self.intercept_ = b
        return self

    def predict(self, X):
        if not hasattr(self, "coef_"):
            raise NotFittedError("LinearProbe must be fitted first")
        Xs = self._standardize(check_matrix(X, "X"))
        return np.argmax(Xs @ self.coef_ + self.intercept_, axis=1)

    def score(self, X, y):
        return float(np.mean(self.predict(X) == np.asarray(y)))


def train_linear_probe(features, labels, config: ProbeConfig):
    """K-fold cross-validated probe accuracy.

    Returns {"fold_accuracies": [...], "mean_accuracy": float}.  Folds whose
    training split collapses to a single class are skipped with a warning.
    """
    X = features.pooled() if hasattr(features, "pooled") else check_matrix(features, "features")
    y = np.asarray(labels, dtype=np.int64)
    if len(y) != len(X):
        raise InvalidParameterError("labels must align with feature rows")
    if len(X) < 5 * config.n_classes:
        raise InvalidParameterError(
            f"need at least {5 * config.n_classes} samples for {config.n_classes} classes")
    splitter = KFold(n_splits=config.folds, shuffle=True, random_state=config.seed)
    accuracies = []
    for train_idx, test_idx in splitter.split(X):
        if len(np.unique(y[train_idx])) < 2:
            warnings.warn("skipping fold with a single training class")
            continue
        probe = LinearProbe(config.n_classes, config.steps, config.learning_rate)
        probe.fit(X[train_idx], y[train_idx])
        accuracies.append(probe.score(X[test_idx], y[test_idx]))
    return {"fold_accuracies": accuracies,
            "mean_accuracy": float(np.mean(accuracies)) if accuracies else float("nan")}
