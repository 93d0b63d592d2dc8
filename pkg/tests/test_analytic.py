import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import boosttab as bt
from conftest import BENCH_BETA_STAR, truncate3

positive_leaves_p3 = st.lists(st.integers(1, 10_000), min_size=8, max_size=8)


class TestAnalyticBetas:
    def test_bench_values(self, bench_tree):
        betas = bt.analytic_betas(bench_tree)
        np.testing.assert_allclose(betas, BENCH_BETA_STAR, rtol=1e-12)
        # display convention cuts (not rounds) the decimals
        assert truncate3(betas) == (1.221, 0.852, 0.706)

    def test_single_level(self):
        tree = bt.OutcomeTree(depth=1, counts=np.array([0, 1000, 80, 920]))
        betas = bt.analytic_betas(tree)
        assert betas.shape == (1,)
        assert betas[0] == pytest.approx(0.5 * math.log(11.5), rel=1e-15)
        assert betas[0] == pytest.approx(1.2212, abs=5e-5)

    def test_balanced_tree_gives_zero(self):
        tree = bt.OutcomeTree.from_leaves([7, 7, 7, 7, 7, 7, 7, 7])
        assert bt.analytic_betas(tree).tolist() == [0.0, 0.0, 0.0]

    def test_state_fields(self, bench_tree):
        state = bt.analytic_weights(bench_tree)
        np.testing.assert_allclose(state.taus, np.exp(state.betas), rtol=1e-15)
        assert state.miss_mass.shape == (3,)
        assert not state.used_log_space
        # first level masses are the raw counts
        assert state.miss_mass[0] == 80
        assert state.hit_mass[0] == 920
        # reweighted node masses vanish exactly where counts do
        zero = state.tilde[2:] == 0
        assert np.array_equal(zero, bench_tree.counts[2:] == 0)

    def test_balancing_identity(self, bench_tree):
        # applying the step factor equalizes the two sides of each level
        state = bt.analytic_weights(bench_tree)
        for k in range(3):
            lhs = state.miss_mass[k] * state.taus[k]
            rhs = state.hit_mass[k] / state.taus[k]
            assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_prefix_property(self, bench_tree):
        full = bt.analytic_betas(bench_tree)
        for k in (1, 2):
            prefix = bt.analytic_betas(bench_tree.truncated(k))
            assert prefix.tolist() == full[:k].tolist()

    @settings(max_examples=50, deadline=None)
    @given(positive_leaves_p3)
    def test_closed_form_matches_recursion(self, leaves):
        tree = bt.OutcomeTree.from_leaves(leaves)
        recursion = bt.analytic_betas(tree)
        closed = bt.closed_form_p3(tree)
        np.testing.assert_allclose(closed, recursion, rtol=1e-14, atol=1e-14)

    @settings(max_examples=30, deadline=None)
    @given(positive_leaves_p3, st.sampled_from([2, 4, 8, 1024]))
    def test_scale_invariance_power_of_two(self, leaves, scale):
        base = bt.analytic_betas(bt.OutcomeTree.from_leaves(leaves))
        scaled = bt.analytic_betas(
            bt.OutcomeTree.from_leaves([scale * v for v in leaves])
        )
        assert base.tolist() == scaled.tolist()

    @settings(max_examples=30, deadline=None)
    @given(positive_leaves_p3, st.integers(2, 100))
    def test_scale_invariance_integer(self, leaves, scale):
        # the count ratios are scale-free exactly; float rounding of the
        # intermediate products leaves ~1e-16 of absolute drift (power-of-two
        # scalings, tested above, commute with rounding and stay bitwise)
        base = bt.analytic_betas(bt.OutcomeTree.from_leaves(leaves))
        scaled = bt.analytic_betas(
            bt.OutcomeTree.from_leaves([scale * v for v in leaves])
        )
        np.testing.assert_allclose(scaled, base, rtol=1e-12, atol=1e-13)

    def test_uniform_leaves_scale_exactly(self):
        for scale in (1, 3, 17, 123456):
            tree = bt.OutcomeTree.from_leaves([scale] * 8)
            assert bt.analytic_betas(tree).tolist() == [0.0, 0.0, 0.0]


class TestInfiniteWeight:
    def test_level_one(self):
        tree = bt.OutcomeTree(depth=1, counts=np.array([0, 5, 0, 5]))
        with pytest.raises(bt.InfiniteWeightError, match="step 1") as exc:
            bt.analytic_betas(tree)
        assert exc.value.step == 1
        assert exc.value.side == "misclassified"

    def test_level_two(self):
        # second classifier correct on every example: right side empty
        tree = bt.OutcomeTree.from_leaves([0, 5, 0, 7])
        with pytest.raises(bt.InfiniteWeightError, match="step 2") as exc:
            bt.analytic_betas(tree)
        assert exc.value.step == 2

    def test_closed_form_raises_alike(self):
        tree = bt.OutcomeTree.from_leaves([0, 0, 0, 5, 0, 0, 0, 7])
        with pytest.raises(bt.InfiniteWeightError):
            bt.analytic_betas(tree)
        with pytest.raises(bt.InfiniteWeightError):
            bt.closed_form_p3(tree)

    def test_closed_form_needs_depth3(self):
        tree = bt.OutcomeTree.from_leaves([1, 2, 3, 4])
        with pytest.raises(bt.ValidationError):
            bt.closed_form_p3(tree)


class TestLogSpace:
    @settings(max_examples=40, deadline=None)
    @given(positive_leaves_p3)
    def test_log_path_agrees_with_linear(self, leaves):
        tree = bt.OutcomeTree.from_leaves(leaves)
        linear = bt.analytic_weights(tree, log_space_threshold=np.inf)
        logged = bt.analytic_weights(tree, log_space_threshold=0.0)
        assert not linear.used_log_space
        assert logged.used_log_space
        np.testing.assert_allclose(logged.betas, linear.betas, rtol=1e-12, atol=1e-13)
        np.testing.assert_allclose(
            logged.miss_mass, linear.miss_mass, rtol=1e-12
        )

    def test_extreme_imbalance_stays_finite(self):
        leaves = [1, 10**15, 10**15, 1, 1, 10**15, 10**15, 1]
        tree = bt.OutcomeTree.from_leaves(leaves)
        betas = bt.analytic_betas(tree)
        assert np.all(np.isfinite(betas))

    def test_log_path_raises_on_true_zero_side(self):
        tree = bt.OutcomeTree(depth=1, counts=np.array([0, 5, 5, 0]))
        with pytest.raises(bt.InfiniteWeightError, match="correct"):
            bt.analytic_weights(tree, log_space_threshold=0.0)
