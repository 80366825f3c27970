"""The three pixel classifiers: decision stump on the raw amplitude,
L2-regularized logistic regression on all 42 features, and the random forest
(see forest.py). All emit a per-sample track probability in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import LabeledDataset
from .features import N_FEATURES
from .forest import ForestModel, train_forest_arrays


@dataclass(frozen=True)
class TrainConfig:
    """Knobs for all three classifiers plus the sampling seed.

    The paper-derived default is 100 trees; everything else (learning rate,
    epochs, L2, mtry, leaf size) is a declared convention, not a quoted value.
    """

    n_trees: int = 100
    mtry: int = 6  # floor(sqrt(42))
    min_leaf: int = 1
    bootstrap: bool = True  # test hook; production forests always bootstrap
    lr_learning_rate: float = 0.1
    lr_epochs: int = 500
    lr_l2: float = 1e-4
    lr_tolerance: float = 1e-6
    seed: int = 0
    ratio_seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1 or self.mtry < 1 or self.min_leaf < 1 or self.lr_epochs < 1:
            raise ValueError("counts must be >= 1")
        if self.lr_learning_rate <= 0 or self.lr_l2 < 0 or self.lr_tolerance <= 0:
            raise ValueError("rates must be positive")


# ------------------------------------------------------------------ stump

@dataclass(frozen=True)
class StumpModel:
    """One-level tree on the amplitude (feature 0).

    polarity +1 predicts track above the threshold, -1 below it.
    """

    threshold: float
    polarity: int

    def decide(self, amplitudes) -> np.ndarray:
        amplitudes = np.asarray(amplitudes, dtype=np.float64)
        if self.polarity > 0:
            return (amplitudes > self.threshold).astype(np.uint8)
        return (amplitudes < self.threshold).astype(np.uint8)

    def predict_proba(self, X) -> np.ndarray:
        """Min-max scaled amplitude, oriented by polarity.

        Strictly monotone in the amplitude, so sweeping the score threshold
        reproduces the plain amplitude-threshold baseline. A constant batch
        scores 0.5 everywhere.
        """
        amps = _amplitude_column(X)
        lo, hi = float(amps.min()), float(amps.max())
        if hi == lo:
            return np.full(len(amps), 0.5)
        scaled = (amps - lo) / (hi - lo)
        return scaled if self.polarity > 0 else 1.0 - scaled


def _amplitude_column(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 2:
        if X.shape[1] != N_FEATURES:
            raise ValueError(f"expected (N, {N_FEATURES}) features, got {X.shape}")
        return X[:, 0]
    return X


def train_stump(amplitudes, labels) -> StumpModel:
    """Pick the Gini-optimal threshold among midpoints of adjacent distinct
    sorted amplitudes; ties go to the smaller threshold."""
    amps = np.asarray(amplitudes, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if amps.ndim != 1:
        amps = _amplitude_column(amps)
    n = len(amps)
    n_pos = int(y.sum())
    if n_pos == 0 or n_pos == n:
        raise ValueError("training data must contain both classes")

    order = np.argsort(amps, kind="stable")
    v = amps[order]
    yy = y[order]
    cum_pos = np.cumsum(yy)

    boundaries = np.flatnonzero(v[:-1] < v[1:])
    if len(boundaries) == 0:
        raise ValueError("amplitudes are all identical; no threshold exists")
    n_left = boundaries + 1
    pos_left = cum_pos[boundaries]
    n_right = n - n_left
    pos_right = n_pos - pos_left

    def gini(p, m):
        frac = p / m
        return 2.0 * frac * (1.0 - frac)

    weighted = (n_left * gini(pos_left, n_left) + n_right * gini(pos_right, n_right)) / n
    best = int(np.argmin(weighted))  # first minimum = smallest threshold
    b = boundaries[best]
    threshold = 0.5 * (v[b] + v[b + 1])
    rate_above = pos_right[best] / n_right[best]
    rate_below = pos_left[best] / n_left[best]
    polarity = 1 if rate_above >= rate_below else -1
    return StumpModel(threshold=float(threshold), polarity=polarity)


# ------------------------------------------------------------------ logistic regression

@dataclass(frozen=True)
class LogRegModel:
    """Logistic regression on z-scored features."""

    weights: np.ndarray
    bias: float
    means: np.ndarray
    scales: np.ndarray

    def __post_init__(self):
        if len(self.weights) != len(self.means) or len(self.weights) != len(self.scales):
            raise ValueError("weights/means/scales lengths differ")
        if np.any(self.scales <= 0):
            raise ValueError("feature scales must be strictly positive")

    def predict_proba(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != len(self.weights):
            raise ValueError(f"expected (N, {len(self.weights)}) features, got {X.shape}")
        z = (X - self.means) / self.scales
        return _sigmoid(z @ self.weights + self.bias)


def _sigmoid(t):
    out = np.empty_like(t, dtype=np.float64)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    e = np.exp(t[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def _log_loss(p, y, w, l2):
    eps = 1e-12
    ce = -np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps))
    return ce + 0.5 * l2 * float(w @ w)


def train_logreg(data, config: TrainConfig = TrainConfig()) -> LogRegModel:
    """Batch gradient descent on the L2-regularized logistic loss.

    Features are z-scored with the training statistics. A step that would
    increase the loss is rejected and the learning rate halved, so the loss
    is non-increasing over accepted steps. Stops when the gradient max-norm
    drops below the tolerance or the epoch budget runs out.
    """
    X, y = _training_arrays(data)
    X = X.astype(np.float64)
    n, d = X.shape
    means = X.mean(axis=0)
    scales = X.std(axis=0)
    scales[scales == 0] = 1.0
    Z = (X - means) / scales

    w = np.zeros(d)
    b = 0.0
    rate = config.lr_learning_rate
    p = _sigmoid(Z @ w + b)
    loss = _log_loss(p, y, w, config.lr_l2)
    for _ in range(config.lr_epochs):
        err = p - y
        grad_w = (err @ Z) / n + config.lr_l2 * w
        grad_b = float(err.mean())
        if max(np.abs(grad_w).max(), abs(grad_b)) < config.lr_tolerance:
            break
        new_w = w - rate * grad_w
        new_b = b - rate * grad_b
        new_p = _sigmoid(Z @ new_w + new_b)
        new_loss = _log_loss(new_p, y, new_w, config.lr_l2)
        if not np.isfinite(new_loss):
            raise FloatingPointError("logistic loss is non-finite; learning rate diverged")
        if new_loss > loss:
            rate *= 0.5  # rejected step
            continue
        w, b, p, loss = new_w, new_b, new_p, new_loss
    return LogRegModel(weights=w, bias=float(b), means=means, scales=scales)


# ------------------------------------------------------------------ forest + dispatch

def train_forest(data, config: TrainConfig = TrainConfig(), n_jobs: int | None = None) -> ForestModel:
    """Random forest per the configured tree count / mtry / leaf size."""
    X, y = _training_arrays(data)
    return train_forest_arrays(
        X,
        y,
        n_trees=config.n_trees,
        mtry=config.mtry,
        min_leaf=config.min_leaf,
        bootstrap=config.bootstrap,
        seed=config.seed,
        n_jobs=n_jobs,
    )


def _training_arrays(data) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(data, LabeledDataset):
        X, y = data.X, data.y
    else:
        X, y = data
    X = np.asarray(X)
    y = np.asarray(y)
    n_pos = int(np.sum(y == 1))
    if n_pos == 0 or n_pos == len(y):
        raise ValueError("training data must contain both classes")
    return X, y


def predict_proba(model, X) -> np.ndarray:
    """Uniform prediction entry point for any of the three model types; each
    model validates the feature width against its own training layout."""
    return model.predict_proba(X)


def feature_importance(model: ForestModel) -> np.ndarray:
    """Normalized mean-decrease-in-impurity importances of a trained forest."""
    return model.feature_importance()


def importance_ranking(model: ForestModel, top: int = 10) -> list[tuple[int, str, float]]:
    """(feature index, feature name, importance) rows, most important first."""
    from .features import FEATURE_NAMES

    imp = model.feature_importance()
    order = np.argsort(-imp, kind="stable")
    return [(int(i), FEATURE_NAMES[i], float(imp[i])) for i in order[:top]]
