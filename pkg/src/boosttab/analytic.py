"""Closed-form recovery of the boosting weights from a configuration tree.

The per-step weight is beta_k = (1/2) ln(b_k / a_k), where a_k (resp. b_k)
is the total reweighted mass of examples the step-k classifier gets wrong
(resp. right).  The reweighting multiplier of a node is the product over its
ancestors of tau_t = exp(beta_t), taken as tau_t for a -1 outcome and
1/tau_t for a +1 outcome, so the whole computation runs on the tree counts
alone: no example weights are ever touched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfiniteWeightError, ValidationError
from .tree import OutcomeTree

# |beta_k| beyond which multiplier products risk overflow in linear space;
# past it the recursion restarts with log-space accumulation.
LOG_SPACE_THRESHOLD = 30.0


@dataclass(frozen=True)
class AnalyticWeights:
    """Full state of the weight recursion on one tree.

    ``tilde`` holds the reweighted configuration masses for every node
    (index 0 and 1 unused): count times the parent's accumulated multiplier.
    ``miss_mass``/``hit_mass`` are their per-level sums over the wrong/right
    side (the a_k and b_k of the per-level report).
    """

    betas: np.ndarray
    taus: np.ndarray
    miss_mass: np.ndarray
    hit_mass: np.ndarray
    tilde: np.ndarray
    used_log_space: bool

    def to_report_fragment(self) -> dict:
        return {
            "betas_analytic": [float(b) for b in self.betas],
            "taus": [float(t) for t in self.taus],
            "per_level": {
                "a": [float(a) for a in self.miss_mass],
                "b": [float(b) for b in self.hit_mass],
            },
        }


def analytic_weights(
    tree: OutcomeTree, log_space_threshold: float = LOG_SPACE_THRESHOLD
) -> AnalyticWeights:
    """Run the level recursion and return its full state.

    Runs in linear space and restarts in log space if any step weight
    exceeds ``log_space_threshold`` in magnitude or a mass over- or
    underflows.  Raises InfiniteWeightError when one side of a level has
    zero total count mass (the step weight would diverge).
    """
    try:
        return _recurse_linear(tree, log_space_threshold)
    except _NeedsLogSpace:
        return _recurse_log(tree)


class _NeedsLogSpace(Exception):
    pass


def _recurse_linear(tree: OutcomeTree, threshold: float) -> AnalyticWeights:
    p = tree.depth
    counts = tree.counts
    betas = np.zeros(p)
    taus = np.zeros(p)
    miss = np.zeros(p)
    hit = np.zeros(p)
    tilde = np.zeros(counts.shape[0])
    mult = np.zeros(2**p)  # accumulated multiplier per node, heap-indexed
    mult[1] = 1.0
    for k in range(1, p + 1):
        lo, hi = 2**k, 2 ** (k + 1)
        parent_mult = mult[lo // 2 : hi // 2]
        left = counts[lo:hi:2] * parent_mult
        right = counts[lo + 1 : hi : 2] * parent_mult
        a = left.sum()
        b = right.sum()
        if not (np.isfinite(a) and np.isfinite(b)):
            raise _NeedsLogSpace
        for mass, side, child in ((a, "misclassified", lo), (b, "correct", lo + 1)):
            if mass == 0.0:
                if np.any(counts[child:hi:2] > 0):
                    raise _NeedsLogSpace  # underflow, not a true zero
                raise InfiniteWeightError(step=k, side=side)
        beta = 0.5 * np.log(b / a)
        if abs(beta) >= threshold:
            raise _NeedsLogSpace
        tau = np.exp(beta)
        tilde[lo:hi:2] = left
        tilde[lo + 1 : hi : 2] = right
        betas[k - 1], taus[k - 1] = beta, tau
        miss[k - 1], hit[k - 1] = a, b
        if k < p:
            mult[lo:hi:2] = parent_mult * tau
            mult[lo + 1 : hi : 2] = parent_mult / tau
    return AnalyticWeights(
        betas=betas, taus=taus, miss_mass=miss, hit_mass=hit, tilde=tilde,
        used_log_space=False,
    )


def _logsumexp(values: np.ndarray) -> float:
    top = values.max()
    if top == -np.inf:
        return -np.inf
    return float(top + np.log(np.exp(values - top).sum()))


def _recurse_log(tree: OutcomeTree) -> AnalyticWeights:
    p = tree.depth
    with np.errstate(divide="ignore"):
        log_counts = np.log(tree.counts.astype(np.float64))
    betas = np.zeros(p)
    taus = np.zeros(p)
    miss = np.zeros(p)
    hit = np.zeros(p)
    tilde = np.zeros(tree.counts.shape[0])
    log_mult = np.zeros(2**p)
    for k in range(1, p + 1):
        lo, hi = 2**k, 2 ** (k + 1)
        parent = log_mult[lo // 2 : hi // 2]
        log_left = log_counts[lo:hi:2] + parent
        log_right = log_counts[lo + 1 : hi : 2] + parent
        log_a = _logsumexp(log_left)
        log_b = _logsumexp(log_right)
        if log_a == -np.inf:
            raise InfiniteWeightError(step=k, side="misclassified")
        if log_b == -np.inf:
            raise InfiniteWeightError(step=k, side="correct")
        beta = 0.5 * (log_b - log_a)
        with np.errstate(over="ignore"):
            tilde[lo:hi:2] = np.exp(log_left)
            tilde[lo + 1 : hi : 2] = np.exp(log_right)
            betas[k - 1], taus[k - 1] = beta, np.exp(beta)
            miss[k - 1], hit[k - 1] = np.exp(log_a), np.exp(log_b)
        if k < p:
            log_mult[lo:hi:2] = parent + beta
            log_mult[lo + 1 : hi : 2] = parent - beta
    return AnalyticWeights(
        betas=betas, taus=taus, miss_mass=miss, hit_mass=hit, tilde=tilde,
        used_log_space=True,
    )


def analytic_betas(
    tree: OutcomeTree, log_space_threshold: float = LOG_SPACE_THRESHOLD
) -> np.ndarray:
    """The boosting weight vector computed from tree counts alone."""
    return analytic_weights(tree, log_space_threshold).betas


def closed_form_p3(tree: OutcomeTree) -> np.ndarray:
    """Literal three-level closed form for a depth-3 tree.

    Equivalent to ``analytic_betas`` (to float rounding); kept as a separate
    code path because it doubles as a cross-check of the recursion.
    """
    if tree.depth != 3:
        raise ValidationError(
            f"closed form is defined for depth 3, got {tree.depth}"
        )
    c = tree.counts

    if c[2] == 0:
        raise InfiniteWeightError(step=1, side="misclassified")
    if c[3] == 0:
        raise InfiniteWeightError(step=1, side="correct")
    t1 = np.sqrt(c[3] / c[2])
    b1 = np.log(t1)

    a2 = c[4] * t1 + c[6] / t1
    b2_mass = c[5] * t1 + c[7] / t1
    if a2 == 0:
        raise InfiniteWeightError(step=2, side="misclassified")
    if b2_mass == 0:
        raise InfiniteWeightError(step=2, side="correct")
    t2 = np.sqrt(b2_mass / a2)
    b2 = np.log(t2)

    a3 = c[8] * t1 * t2 + c[10] * t1 / t2 + c[12] * t2 / t1 + c[14] / (t1 * t2)
    b3_mass = c[9] * t1 * t2 + c[11] * t1 / t2 + c[13] * t2 / t1 + c[15] / (t1 * t2)
    if a3 == 0:
        raise InfiniteWeightError(step=3, side="misclassified")
    if b3_mass == 0:
        raise InfiniteWeightError(step=3, side="correct")
    b3 = np.log(np.sqrt(b3_mass / a3))

    return np.array([b1, b2, b3])
