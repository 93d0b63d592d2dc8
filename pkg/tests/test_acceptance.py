"""Acceptance suite: one test per exit criterion, at its stated tolerance.

Each test prints one `ACCEPTANCE <name>: PASS|FAIL` line (visible with
``pytest -s`` or in the captured output of a failing run).  Tolerances are
pinned here and nowhere else.
"""

import json
import subprocess
import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest

import boosttab as bt
from conftest import BENCH_GAP, grid_minimize_p3, random_outcomes, truncate3


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {name}: FAIL")
        raise
    print(f"ACCEPTANCE {name}: PASS")


def test_benchmark_fixture_reproduction(bench_tree):
    """Leaf table (4,9,18,16 / 767,42,44,100) -> weights 1.221, 0.852, 0.706.

    The reference display cuts the decimals toward zero rather than
    rounding to nearest (the exact values are 1.22117..., 0.85253...,
    0.70650...), so the comparison truncates.
    """
    with criterion("benchmark-fixture-reproduction"):
        start = time.perf_counter()
        recursion = bt.analytic_betas(bench_tree)
        closed = bt.closed_form_p3(bench_tree)
        elapsed = time.perf_counter() - start
        assert truncate3(recursion) == (1.221, 0.852, 0.706)
        assert truncate3(closed) == (1.221, 0.852, 0.706)
        assert elapsed < 0.05  # microsecond-scale work, generous guard


def test_iterative_equals_analytic():
    """50 seeded runs at p=3 plus 20 at p=5: per-run MAE <= 1e-12, < 10 s."""
    with criterion("iterative-analytic-equivalence"):
        start = time.perf_counter()
        runs = [(seed, 3) for seed in range(50)] + [(seed, 5) for seed in range(100, 120)]
        for seed, p in runs:
            ds = bt.generate_gaussian(bt.GaussianSpec(n=1000, d=2, seed=seed))
            model = bt.train_adaboost(ds, p)
            assert model.status == "completed", (seed, p, model.status)
            tree = bt.build_tree(bt.outcome_matrix(ds, model.stumps))
            analytic = bt.analytic_betas(tree)
            mae = float(np.mean(np.abs(model.betas - analytic)))
            assert mae <= 1e-12, (seed, p, mae)
        assert time.perf_counter() - start < 10.0


def test_risk_oracle_equivalence():
    """Tree-based and per-example risk agree to 1e-12 relative, 200 pairs."""
    with criterion("risk-oracle-equivalence"):
        rng = np.random.default_rng(2024)
        for _ in range(200):
            n = int(rng.integers(1, 2001))
            p = int(rng.integers(1, 6))
            outcomes = random_outcomes(rng, n, p)
            tree = bt.build_tree(outcomes)
            beta = rng.normal(0, 1, size=p)
            via_tree = bt.risk_from_tree(tree, beta)
            via_examples = bt.risk_bruteforce(outcomes, beta)
            assert via_tree == pytest.approx(via_examples, rel=1e-12)


def test_gradient_against_central_differences():
    """10 random trees x 100 points: step-1e-6 central differences, 1e-6."""
    with criterion("gradient-correctness"):
        rng = np.random.default_rng(7)
        h = 1e-6
        for _ in range(10):
            p = int(rng.integers(1, 6))
            leaves = rng.integers(0, 1000, size=2**p)
            if leaves.sum() == 0:
                leaves[0] = 1
            tree = bt.OutcomeTree.from_leaves(leaves)
            for _ in range(100):
                beta = rng.normal(0, 1, size=p)
                g = bt.risk_gradient(tree, beta)
                fd = np.zeros(p)
                for k in range(p):
                    e = np.zeros(p)
                    e[k] = h
                    fd[k] = (
                        bt.risk_from_tree(tree, beta + e)
                        - bt.risk_from_tree(tree, beta - e)
                    ) / (2 * h)
                rel = np.abs(fd - g).max() / max(1.0, np.abs(g).max())
                assert rel <= 1e-6


def test_analytic_point_is_not_the_minimum(bench_tree):
    """Stationarity fails at the closed-form weights; Newton finds the true
    minimum, cross-checked by dense grid search; the risk gap is the frozen
    regression constant."""
    with criterion("not-the-minimum"):
        beta_star = bt.analytic_betas(bench_tree)
        residual = bt.euler_residual_p3(bench_tree, beta_star)
        assert np.abs(residual).max() > 1e-3

        beta_min, report = bt.minimize_risk(bench_tree)
        assert report.converged
        assert report.iterations <= 100
        assert report.gradient_norm <= 1e-12

        gap = bt.risk_from_tree(bench_tree, beta_star) - report.risk_value
        assert gap > 0
        assert gap == pytest.approx(BENCH_GAP, abs=1e-9)

        grid = grid_minimize_p3(bench_tree, lo=-5.0, hi=5.0, step=0.1, refine_step=0.01)
        assert np.abs(grid - beta_min.to_array()).max() <= 0.02


def test_single_level_coincidence():
    """Analytic weight == Newton minimizer to 1e-10 on 20 random trees."""
    with criterion("single-level-coincidence"):
        rng = np.random.default_rng(55)
        for _ in range(20):
            counts = rng.integers(1, 10**6, size=2)
            tree = bt.OutcomeTree.from_leaves(counts)
            analytic = bt.analytic_betas(tree)[0]
            beta_min, report = bt.minimize_risk(tree)
            assert report.converged
            assert abs(beta_min.to_array()[0] - analytic) <= 1e-10


def test_tree_invariants():
    """Conservation and parent rule exact on 100 matrices; genealogy
    round-trip below 2**6."""
    with criterion("tree-invariants"):
        rng = np.random.default_rng(123)
        for _ in range(100):
            n = int(rng.integers(1, 500))
            p = int(rng.integers(1, 7))
            tree = bt.build_tree(random_outcomes(rng, n, p))
            for k in range(p + 1):
                assert int(tree.level(k).sum()) == n
            for j in range(1, 2**p):
                assert tree.counts[j] == tree.counts[2 * j] + tree.counts[2 * j + 1]
        for j in range(2, 64):
            assert bt.node_from_genealogy(bt.genealogy(j)) == j


def test_degenerate_trees_fail_loudly(tmp_path):
    """Zero-leaf trees exit with code 3 and a diagnostic, never NaN/Inf."""
    with criterion("degenerate-handling"):
        # a zero leaf whose whole side stays positive: minimize must refuse
        zero_leaf = bt.OutcomeTree.from_leaves([0, 5, 3, 2, 1, 1, 1, 1])
        path_min = tmp_path / "zero_leaf.json"
        bt.save_tree(zero_leaf, path_min)
        res = subprocess.run(
            [sys.executable, "-m", "boosttab", "minimize", "--tree", str(path_min)],
            capture_output=True,
            text=True,
        )
        assert res.returncode == 3
        assert json.loads(res.stderr)["error"] == "CoercivityError"
        assert "nan" not in res.stdout.lower() and "inf" not in res.stdout.lower()

        # an empty side of a level: the closed form must refuse too
        empty_side = bt.OutcomeTree.from_leaves([0, 0, 0, 5, 0, 0, 0, 7])
        path_an = tmp_path / "empty_side.json"
        bt.save_tree(empty_side, path_an)
        res = subprocess.run(
            [sys.executable, "-m", "boosttab", "analytic", "--tree", str(path_an)],
            capture_output=True,
            text=True,
        )
        assert res.returncode == 3
        assert json.loads(res.stderr)["error"] == "InfiniteWeightError"
        assert "nan" not in res.stdout.lower() and "inf" not in res.stdout.lower()

        with pytest.raises(bt.CoercivityError):
            bt.minimize_risk(zero_leaf)
        with pytest.raises(bt.InfiniteWeightError):
            bt.analytic_betas(empty_side)
