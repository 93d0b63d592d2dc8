"""Shared fixtures: the benchmark depth-3 tree and independent oracles."""

import numpy as np
import pytest

import boosttab as bt

# The benchmark truth table used throughout: 1000 examples, three stumps.
BENCH_N = (4, 9, 18, 16)
BENCH_M = (767, 42, 44, 100)
BENCH_LEAVES = (4, 16, 18, 42, 9, 44, 100, 767)  # heap order, indices 8..15

# Frozen full-precision regression values for the benchmark tree (first
# computed independently at 50-digit precision, then pinned).
BENCH_BETA_STAR = (1.2211735176846021, 0.8525346370953804, 0.7065036127469035)
BENCH_BETA_MIN = (0.7969036953031909, 0.9885075966344469, 0.7737949858784348)
BENCH_RISK_STAR = 0.31067302907378685
BENCH_RISK_MIN = 0.28783403113300177
BENCH_GAP = 0.02283899794078509
BENCH_EULER_STAR = (-0.4244169396596398, 54.64870587755535, 54.224288937895736)


@pytest.fixture
def bench_tree() -> bt.OutcomeTree:
    return bt.tree_from_leaf_table_p3(n=BENCH_N, m=BENCH_M)


def random_outcomes(rng: np.random.Generator, n: int, p: int) -> np.ndarray:
    return (rng.integers(0, 2, size=(n, p)) * 2 - 1).astype(np.int8)


def matrix_from_tree(tree: bt.OutcomeTree) -> np.ndarray:
    """A synthetic outcome matrix realizing exactly the tree's leaf counts."""
    signs = bt.level_sign_matrix(tree.depth)
    return np.repeat(signs, tree.leaves, axis=0)


def truncate3(values) -> tuple:
    """Truncate toward zero at 3 decimals (how the display values are cut)."""
    return tuple(np.trunc(np.asarray(values) * 1000) / 1000)


def _vote_risk_p3(c: np.ndarray, b1, b2, b3):
    """n * risk in vote coordinates; written independently of the package."""
    x0 = b1 + b2 + b3
    x1 = -b1 + b2 + b3
    x2 = b1 - b2 + b3
    x3 = b1 + b2 - b3
    return (
        c[11] * np.exp(-x1) + c[12] * np.exp(x1)
        + c[13] * np.exp(-x2) + c[10] * np.exp(x2)
        + c[14] * np.exp(-x3) + c[9] * np.exp(x3)
        + c[15] * np.exp(-x0) + c[8] * np.exp(x0)
    )


def grid_minimize_p3(
    tree: bt.OutcomeTree,
    lo: float = -5.0,
    hi: float = 5.0,
    step: float = 0.1,
    refine_step: float = 0.01,
) -> np.ndarray:
    """Two-pass dense grid search for the p=3 risk minimizer.

    Coarse scan of [lo, hi]^3, then a refined scan of the +-step cube
    around the best coarse point.  Deliberately knows nothing about the
    package's risk evaluation path.
    """
    c = tree.counts
    axis = np.arange(lo, hi + step / 2, step)
    grids = np.meshgrid(axis, axis, axis, indexing="ij")
    values = _vote_risk_p3(c, *grids)
    flat = np.unravel_index(np.argmin(values), values.shape)
    best = np.array([axis[i] for i in flat])

    axes = [
        np.arange(b - step, b + step + refine_step / 2, refine_step) for b in best
    ]
    grids = np.meshgrid(*axes, indexing="ij")
    values = _vote_risk_p3(c, *grids)
    flat = np.unravel_index(np.argmin(values), values.shape)
    return np.array([ax[i] for ax, i in zip(axes, flat)])
