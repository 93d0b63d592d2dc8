"""Weighted decision stumps: depth-1 threshold classifiers.

A stump predicts ``polarity`` when the selected feature is strictly greater
than the threshold and ``-polarity`` otherwise; the boundary point goes to
the "<=" side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import LabeledDataset
from .errors import DegenerateDataError, ValidationError


@dataclass(frozen=True)
class DecisionStump:
    feature_index: int
    threshold: float
    polarity: int

    def __post_init__(self):
        if self.feature_index < 0:
            raise ValidationError(f"negative feature index {self.feature_index}")
        if self.polarity not in (-1, 1):
            raise ValidationError(f"polarity must be -1 or +1, got {self.polarity}")
        if not np.isfinite(self.threshold):
            raise ValidationError(f"threshold must be finite, got {self.threshold}")

    def validate_dim(self, d: int) -> None:
        if self.feature_index >= d:
            raise ValidationError(
                f"stump uses feature {self.feature_index} but data has d={d}"
            )

    def predict(self, x) -> int:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1 or x.shape[0] <= self.feature_index:
            raise ValidationError(
                f"point of dimension {x.shape} incompatible with feature "
                f"index {self.feature_index}"
            )
        return self.polarity if x[self.feature_index] > self.threshold else -self.polarity

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        self.validate_dim(X.shape[1])
        above = X[:, self.feature_index] > self.threshold
        return np.where(above, self.polarity, -self.polarity).astype(np.int64)


def stump_predict(stump: DecisionStump, x) -> int:
    """Predict the sign for a single point (boundary goes to the <= side)."""
    return stump.predict(x)


def _validate_weights(weights: np.ndarray, n: int) -> np.ndarray:
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (n,):
        raise ValidationError(f"weights shape {weights.shape} != ({n},)")
    if not np.all(np.isfinite(weights)) or not np.all(weights > 0):
        raise ValidationError("weights must all be strictly positive and finite")
    return weights


def fit_stump(dataset: LabeledDataset, weights: np.ndarray) -> DecisionStump:
    """Exact minimizer of weighted misclassification error over all stumps.

    The candidate grid per feature is every midpoint between consecutive
    distinct sorted values plus one threshold below the minimum (which gives
    the two constant classifiers).  Ties break deterministically: lowest
    feature index, then lowest threshold, then polarity +1.

    Raises DegenerateDataError when every feature is constant.
    """
    weights = _validate_weights(weights, dataset.n)
    X, y = dataset.features, dataset.labels

    if np.all(X == X[0, :]):
        raise DegenerateDataError("no split available: all features are constant")

    best = None  # (error, threshold, polarity_key, feature)
    for feature in range(dataset.d):
        res = _scan_feature(X[:, feature], y, weights)
        if best is None or res[0] < best[0]:
            best = res + (feature,)
    error, threshold, polarity_key, feature = best
    return DecisionStump(
        feature_index=feature, threshold=threshold, polarity=1 - 2 * polarity_key
    )


def _scan_feature(x, y, w):
    """Best (error, threshold, polarity_key) for one feature.

    polarity_key is 0 for +1 and 1 for -1 so that tuple comparison realizes
    the "+1 first" tie-break.
    """
    order = np.argsort(x, kind="stable")
    xs, ys, ws = x[order], y[order], w[order]

    w_pos_total = ws[ys > 0].sum()
    w_neg_total = ws[ys < 0].sum()

    # cum_pos[i] / cum_neg[i]: class mass among the i smallest examples,
    # i.e. the examples on the "<=" side when splitting after position i.
    cum_pos = np.cumsum(np.where(ys > 0, ws, 0.0))
    cum_neg = np.cumsum(np.where(ys < 0, ws, 0.0))

    splittable = np.flatnonzero(xs[:-1] < xs[1:]) + 1  # counts i with a gap
    thresholds = np.empty(1 + splittable.size)
    below_min = xs[0] - 1.0  # below the minimum: constant classifier
    if not below_min < xs[0]:
        below_min = np.nextafter(xs[0], -np.inf)
    thresholds[0] = below_min
    # a/2 + b/2 rather than (a+b)/2: immune to overflow at the float64 edge
    thresholds[1:] = 0.5 * xs[splittable - 1] + 0.5 * xs[splittable]

    # error of the polarity +1 stump at each candidate: positives on the
    # "<=" side plus negatives on the ">" side.
    err_pos = np.empty(1 + splittable.size)
    err_pos[0] = w_neg_total
    err_pos[1:] = cum_pos[splittable - 1] + (w_neg_total - cum_neg[splittable - 1])
    err_neg = (w_pos_total + w_neg_total) - err_pos

    i_pos = int(np.argmin(err_pos))  # first min = lowest threshold
    i_neg = int(np.argmin(err_neg))
    cand_pos = (err_pos[i_pos], thresholds[i_pos], 0)
    cand_neg = (err_neg[i_neg], thresholds[i_neg], 1)
    return min(cand_pos, cand_neg)


def weighted_error(classifier, dataset: LabeledDataset, weights: np.ndarray) -> float:
    """Normalized weighted misclassification mass, in [0, 1]."""
    weights = _validate_weights(weights, dataset.n)
    preds = classifier.predict_batch(dataset.features)
    wrong = preds != dataset.labels
    return float(weights[wrong].sum() / weights.sum())
