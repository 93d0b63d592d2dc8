"""Convexified empirical risk: evaluation, stationarity, exact minimization.

The risk of a weight vector is the mean over examples of
exp(-label * weighted vote), here always with the 1/n normalization.  On a
configuration tree it collapses to a sum over the 2**p leaves, weighted by
the leaf counts.  The boosting weights are stationary for each coordinate
held in sequence but generally not for the full vector; ``minimize_risk``
finds the actual minimizer by damped Newton iteration, and
``euler_residual_p3`` evaluates the three-classifier stationarity system
whose root that minimizer is.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .analytic import analytic_betas
from .data import LabeledDataset, outcome_matrix
from .errors import CoercivityError, InfiniteWeightError, ValidationError
from .stumps import DecisionStump
from .tree import OutcomeTree, build_tree, level_sign_matrix

NEWTON_TOL = 1e-12          # max-norm of the gradient at convergence
NEWTON_MAX_ITERS = 100
ARMIJO_SLOPE = 1e-4
ARMIJO_MAX_HALVINGS = 60


@dataclass(frozen=True)
class WeightVector:
    """A classifier weight vector, with the 3-classifier vote coordinates.

    For p=3 the eight possible values of the weighted vote are +-X_0..+-X_3
    with X_1 = -b1+b2+b3, X_2 = b1-b2+b3, X_3 = b1+b2-b3 and
    X_0 = b1+b2+b3 = X_1+X_2+X_3.
    """

    betas: tuple[float, ...]

    def __post_init__(self):
        betas = tuple(float(b) for b in np.atleast_1d(np.asarray(self.betas)))
        if len(betas) < 1:
            raise ValidationError("weight vector must have at least one entry")
        if not all(np.isfinite(b) for b in betas):
            raise ValidationError("weights must be finite")
        object.__setattr__(self, "betas", betas)

    @property
    def p(self) -> int:
        return len(self.betas)

    def to_array(self) -> np.ndarray:
        return np.array(self.betas)

    def vote_coordinates(self) -> tuple[float, float, float, float]:
        """(X_0, X_1, X_2, X_3) for p=3; checks both defining identities."""
        if self.p != 3:
            raise ValidationError(f"vote coordinates need p=3, got {self.p}")
        b1, b2, b3 = self.betas
        x0 = b1 + b2 + b3
        x1, x2, x3 = -b1 + b2 + b3, b1 - b2 + b3, b1 + b2 - b3
        scale = 1.0 + abs(b1) + abs(b2) + abs(b3)
        assert abs(x0 - (b1 + b2 + b3)) <= 1e-12 * scale
        assert abs(x0 - (x1 + x2 + x3)) <= 1e-12 * scale
        return x0, x1, x2, x3


@dataclass(frozen=True)
class RiskReport:
    risk_value: float
    gradient: np.ndarray
    gradient_norm: float  # max-norm
    euler_residual: np.ndarray | None  # p=3 only
    converged: bool
    iterations: int


def _beta_array(beta, depth: int) -> np.ndarray:
    if isinstance(beta, WeightVector):
        beta = beta.to_array()
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != (depth,):
        raise ValidationError(
            f"weight vector of shape {beta.shape} does not match depth {depth}"
        )
    if not np.all(np.isfinite(beta)):
        raise ValidationError("weights must be finite")
    return beta


def _leaf_weights(tree: OutcomeTree, beta: np.ndarray) -> np.ndarray:
    signs = level_sign_matrix(tree.depth).astype(np.float64)
    return tree.leaves * np.exp(-(signs @ beta))


def risk_from_tree(tree: OutcomeTree, beta) -> float:
    """Risk evaluated from leaf counts: (1/n) sum_j c_j exp(-eps(j).beta)."""
    beta = _beta_array(beta, tree.depth)
    return float(_leaf_weights(tree, beta).sum() / tree.n)


def risk_bruteforce(outcomes: np.ndarray, beta) -> float:
    """Per-example risk sum straight off the outcome matrix.

    Independent oracle for ``risk_from_tree``: no tree is ever built.
    """
    outcomes = np.asarray(outcomes, dtype=np.float64)
    beta = _beta_array(beta, outcomes.shape[1])
    return float(np.exp(-(outcomes @ beta)).sum() / outcomes.shape[0])


def risk_gradient(tree: OutcomeTree, beta) -> np.ndarray:
    """Analytic gradient of ``risk_from_tree`` in the weight coordinates."""
    beta = _beta_array(beta, tree.depth)
    signs = level_sign_matrix(tree.depth).astype(np.float64)
    w = tree.leaves * np.exp(-(signs @ beta))
    return -(signs.T @ w) / tree.n


def risk_hessian(tree: OutcomeTree, beta) -> np.ndarray:
    beta = _beta_array(beta, tree.depth)
    signs = level_sign_matrix(tree.depth).astype(np.float64)
    w = tree.leaves * np.exp(-(signs @ beta))
    return (signs.T * w) @ signs / tree.n


def euler_residual_p3(tree: OutcomeTree, beta) -> np.ndarray:
    """Stationarity left-hand sides of the 3-classifier risk, in vote coords.

    Zero exactly at the risk minimizer.  Uses unnormalized counts, i.e. the
    gradient of n times the risk with respect to (X_1, X_2, X_3).
    """
    if tree.depth != 3:
        raise ValidationError(f"Euler system is defined for depth 3, got {tree.depth}")
    beta = _beta_array(beta, 3)
    x0, x1, x2, x3 = WeightVector(betas=tuple(beta)).vote_coordinates()
    c = tree.counts
    shared = -c[15] * np.exp(-x0) + c[8] * np.exp(x0)
    return np.array(
        [
            -c[11] * np.exp(-x1) + c[12] * np.exp(x1) + shared,
            -c[13] * np.exp(-x2) + c[10] * np.exp(x2) + shared,
            -c[14] * np.exp(-x3) + c[9] * np.exp(x3) + shared,
        ]
    )


def _report(tree: OutcomeTree, beta: np.ndarray, converged: bool, iters: int) -> RiskReport:
    g = risk_gradient(tree, beta)
    return RiskReport(
        risk_value=risk_from_tree(tree, beta),
        gradient=g,
        gradient_norm=float(np.abs(g).max()),
        euler_residual=euler_residual_p3(tree, beta) if tree.depth == 3 else None,
        converged=converged,
        iterations=iters,
    )


def minimize_risk(
    tree: OutcomeTree,
    init=None,
    tol: float = NEWTON_TOL,
    max_iters: int = NEWTON_MAX_ITERS,
) -> tuple[WeightVector, RiskReport]:
    """Damped Newton minimization of the risk over the weight vector.

    Requires every leaf count positive (otherwise the risk can fail to be
    coercive and no minimizer need exist: CoercivityError).  Backtracks by
    halving until the Armijo decrease condition holds.  Never raises on
    slow progress: a non-converged RiskReport is returned instead.
    """
    zero_leaves = np.flatnonzero(tree.leaves == 0)
    if zero_leaves.size:
        raise CoercivityError(leaf_index=int(2**tree.depth + zero_leaves[0]))

    beta = np.zeros(tree.depth) if init is None else _beta_array(init, tree.depth).copy()
    iters = 0
    for _ in range(max_iters):
        g = risk_gradient(tree, beta)
        if np.abs(g).max() <= tol:
            return WeightVector(betas=tuple(beta)), _report(tree, beta, True, iters)
        H = risk_hessian(tree, beta)
        direction = np.linalg.solve(H, -g)
        f0 = risk_from_tree(tree, beta)
        slope = float(g @ direction)
        # the resolution term keeps the test meaningful once the decrease
        # falls below one ulp of the risk value (endgame of the iteration)
        resolution = 4.0 * np.finfo(float).eps * abs(f0)
        step = 1.0
        for _ in range(ARMIJO_MAX_HALVINGS):
            trial = risk_from_tree(tree, beta + step * direction)
            if trial <= f0 + ARMIJO_SLOPE * step * slope + resolution:
                break
            step *= 0.5
        beta = beta + step * direction
        iters += 1
    g = risk_gradient(tree, beta)
    converged = bool(np.abs(g).max() <= tol)
    return WeightVector(betas=tuple(beta)), _report(tree, beta, converged, iters)


@dataclass(frozen=True)
class CombinedClassifier:
    """Sign-of-weighted-vote classifier over a fixed stump triple."""

    stumps: tuple[DecisionStump, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        if len(self.stumps) != len(self.betas):
            raise ValidationError("one weight per stump required")
        object.__setattr__(self, "stumps", tuple(self.stumps))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))

    def validate_dim(self, d: int) -> None:
        for s in self.stumps:
            s.validate_dim(d)

    def predict(self, x) -> int:
        vote = sum(b * s.predict(x) for s, b in zip(self.stumps, self.betas))
        return 1 if vote >= 0 else -1

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        votes = np.zeros(np.asarray(X).shape[0])
        for s, b in zip(self.stumps, self.betas):
            votes = votes + b * s.predict_batch(X)
        return np.where(votes >= 0, 1, -1).astype(np.int64)


@dataclass(frozen=True)
class PacketReduction:
    """Result of grouping classifiers into weighted triples."""

    classifiers: tuple
    packet_betas: tuple[tuple[float, ...], ...]
    packet_modes: tuple[str, ...]
    recombined_betas: tuple[float, ...] | None
    recombined_training_error: float | None


def packet_reduce(
    dataset: LabeledDataset, classifiers: Sequence, mode: str = "euler"
) -> PacketReduction:
    """Replace each consecutive triple of classifiers by one voting classifier.

    ``mode`` selects the triple's weights: "euler" takes the exact risk
    minimizer, "analytic" the boosting weights.  A triple whose truth table
    has an empty configuration cannot be Euler-minimized and falls back to
    analytic weights with a warning.  Classifiers left over when the count
    is not divisible by 3 pass through unchanged.

    The reduced list is then itself recombined with analytic weights (one
    classifier is used as-is) and the resulting training error is reported;
    it is None when those weights are unbounded.
    """
    if mode not in ("euler", "analytic"):
        raise ValidationError(f"mode must be 'euler' or 'analytic', got {mode!r}")
    classifiers = list(classifiers)
    reduced: list = []
    packet_betas: list[tuple[float, ...]] = []
    packet_modes: list[str] = []
    for start in range(0, len(classifiers) - len(classifiers) % 3, 3):
        triple = classifiers[start : start + 3]
        tree = build_tree(outcome_matrix(dataset, triple))
        used = mode
        if mode == "euler":
            try:
                beta_vec, _ = minimize_risk(tree)
                betas = beta_vec.to_array()
            except CoercivityError as exc:
                warnings.warn(
                    f"packet {start // 3}: {exc}; falling back to analytic weights",
                    RuntimeWarning,
                    stacklevel=2,
                )
                used = "analytic"
                betas = analytic_betas(tree)
        else:
            betas = analytic_betas(tree)
        reduced.append(CombinedClassifier(stumps=tuple(triple), betas=tuple(betas)))
        packet_betas.append(tuple(float(b) for b in betas))
        packet_modes.append(used)
    reduced.extend(classifiers[len(classifiers) - len(classifiers) % 3 :])

    recombined_betas, recombined_error = _recombine(dataset, reduced)
    return PacketReduction(
        classifiers=tuple(reduced),
        packet_betas=tuple(packet_betas),
        packet_modes=tuple(packet_modes),
        recombined_betas=recombined_betas,
        recombined_training_error=recombined_error,
    )


def _recombine(dataset: LabeledDataset, classifiers: list):
    """Training error of the analytic-weighted vote over ``classifiers``."""
    if len(classifiers) == 1:
        preds = classifiers[0].predict_batch(dataset.features)
        return (1.0,), float(np.mean(preds != dataset.labels))
    try:
        betas = analytic_betas(build_tree(outcome_matrix(dataset, classifiers)))
    except InfiniteWeightError:
        return None, None
    votes = np.zeros(dataset.n)
    for clf, b in zip(classifiers, betas):
        votes = votes + b * clf.predict_batch(dataset.features)
    preds = np.where(votes >= 0, 1, -1)
    return tuple(float(b) for b in betas), float(np.mean(preds != dataset.labels))
