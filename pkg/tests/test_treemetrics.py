"""Tree descriptor tests: worked example values, oracles, shape invariances."""

import math

import numpy as np
import pytest

from surprisalkit.conllu import Token, DependencyTree
from surprisalkit.treemetrics import (
    MlaBudgetExceeded, average_tree_metrics, b2_index, compute_tree_metrics,
    mean_hierarchical_distance, min_linear_arrangement, omega, random_baseline,
    subtree_unevenness, total_dependency_length)

from conftest import exhaustive_mla, make_tree, random_tree


class TestMeanHierarchicalDistance:
    def test_worked_example(self, worked_tree):
        # depths: root 0; mother, turn 1; The, to, off, water 2; the 3
        assert mean_hierarchical_distance(worked_tree) == pytest.approx(13 / 7)

    def test_chain_of_three(self):
        assert mean_hierarchical_distance(make_tree([0, 1, 2])) == 1.5

    @pytest.mark.parametrize("m", [1, 2, 5, 9])
    def test_star_depth_one(self, m):
        assert mean_hierarchical_distance(make_tree([0] + [1] * m)) == 1.0

    def test_single_node_convention(self):
        assert mean_hierarchical_distance(make_tree([0])) == 0.0

    def test_bfs_oracle_on_random_trees(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            tree = random_tree(rng, int(rng.integers(2, 12)))
            children = tree.children()
            depth = {tree.root: 0}
            stack = [tree.root]
            while stack:
                v = stack.pop()
                for c in children[v]:
                    depth[c] = depth[v] + 1
                    stack.append(c)
            expected = sum(depth.values()) / (len(tree) - 1)
            assert mean_hierarchical_distance(tree) == pytest.approx(expected)


class TestTotalDependencyLength:
    def test_worked_example(self, worked_tree):
        assert total_dependency_length(worked_tree) == 10

    def test_chain_natural_order(self):
        assert total_dependency_length(make_tree([0, 1, 2])) == 2

    def test_two_nodes(self):
        assert total_dependency_length(make_tree([0, 1])) == 1


class TestRandomBaseline:
    def test_eight_node_value(self):
        assert random_baseline(8) == 21.0

    def test_two_nodes(self):
        assert random_baseline(2) == 1.0

    def test_single_node(self):
        assert random_baseline(1) == 0.0

    def test_monte_carlo_convergence(self):
        rng = np.random.default_rng(5)
        for n in (5, 12, 30):
            tree = random_tree(rng, n)
            edges = [(t.index - 1, t.head - 1) for t in tree.nodes if t.head != 0]
            positions = np.tile(np.arange(n), (20_000, 1))
            positions = rng.permuted(positions, axis=1)
            total = np.zeros(positions.shape[0], dtype=np.int64)
            for u, v in edges:
                total += np.abs(positions[:, u] - positions[:, v])
            assert total.mean() == pytest.approx(random_baseline(n), rel=0.02)


class TestMinLinearArrangement:
    def test_worked_example_exhaustive(self, worked_tree):
        assert min_linear_arrangement(worked_tree) == 9
        assert exhaustive_mla(worked_tree) == 9

    @pytest.mark.parametrize("n", [2, 5, 9])
    def test_chain_is_already_optimal(self, n):
        chain = make_tree([0] + list(range(1, n)))
        assert min_linear_arrangement(chain) == n - 1

    def test_star_with_four_leaves(self):
        # hub flanked by two leaves per side at distances 1 and 2
        assert min_linear_arrangement(make_tree([0, 1, 1, 1, 1])) == 6

    def test_matches_exhaustive_oracle(self):
        rng = np.random.default_rng(23)
        for n in range(3, 9):
            for _ in range(20):
                tree = random_tree(rng, n)
                assert min_linear_arrangement(tree) == exhaustive_mla(tree)

    def test_budget_exhaustion_raises(self):
        rng = np.random.default_rng(3)
        tree = random_tree(rng, 24)
        with pytest.raises(MlaBudgetExceeded):
            min_linear_arrangement(tree, node_budget=5)

    def test_cap_raises(self):
        chain = make_tree([0] + list(range(1, 30)))
        with pytest.raises(ValueError):
            min_linear_arrangement(chain, max_nodes=20)


class TestOmega:
    def test_worked_example(self, worked_tree):
        value = omega(worked_tree)
        assert value == pytest.approx(11 / 12)
        assert abs(value - 0.917) < 5e-4

    def test_optimal_layout_scores_one(self):
        assert omega(make_tree([0, 1, 2])) == pytest.approx(1.0)

    def test_undefined_below_three_nodes(self):
        assert omega(make_tree([0, 1])) is None
        assert omega(make_tree([0])) is None

    def test_worse_than_random_is_negative(self):
        # star with the hub as the first word: every edge stretches rightward
        tree = make_tree([0, 1, 1, 1, 1, 1, 1, 1, 1])
        assert total_dependency_length(tree) == sum(range(1, 9))
        assert omega(tree) < 0


class TestSubtreeUnevenness:
    def test_worked_example_extended_precision_oracle(self, worked_tree):
        sizes = np.array([1, 2, 8, 1, 5, 1, 1, 2], dtype=np.longdouble)
        p = sizes / sizes.sum()
        expected = float(-(p * np.log2(p)).sum())
        value = subtree_unevenness(worked_tree)
        assert value == pytest.approx(expected, abs=1e-12)
        assert value == pytest.approx(2.5062, abs=1e-4)

    def test_single_node(self):
        assert subtree_unevenness(make_tree([0])) == 0.0

    def test_root_with_two_leaves(self):
        value = subtree_unevenness(make_tree([0, 1, 1]))
        expected = -(3 / 5 * math.log2(3 / 5) + 2 * (1 / 5) * math.log2(1 / 5))
        assert value == pytest.approx(expected, abs=1e-12)
        assert value == pytest.approx(1.3710, abs=1e-4)

    def test_size_sum_equals_depth_sum_plus_n(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            tree = random_tree(rng, int(rng.integers(2, 15)))
            children = tree.children()
            sizes = {}
            order = []
            stack = [tree.root]
            while stack:
                v = stack.pop()
                order.append(v)
                stack.extend(children[v])
            for v in reversed(order):
                sizes[v] = 1 + sum(sizes[c] for c in children[v])
            depth = {tree.root: 0}
            for v in order:
                for c in children[v]:
                    depth[c] = depth[v] + 1
            assert sum(sizes.values()) == sum(depth.values()) + len(tree)


class TestB2Index:
    def test_worked_example(self, worked_tree):
        # leaf probabilities 1/2, 1/6, 1/6, 1/6
        value = b2_index(worked_tree)
        expected = 0.5 + 3 * (1 / 6) * math.log2(6)
        assert value == pytest.approx(expected, abs=1e-12)
        assert value == pytest.approx(1.79248, abs=1e-4)

    def test_root_with_two_leaves(self):
        assert b2_index(make_tree([0, 1, 1])) == pytest.approx(1.0)

    def test_chain_has_zero_balance(self):
        assert b2_index(make_tree([0, 1, 2, 3])) == 0.0

    def test_other_log_base(self):
        tree = make_tree([0, 1, 1])
        assert b2_index(tree, base=math.e) == pytest.approx(math.log(2))

    def test_leaf_probabilities_sum_to_one(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            tree = random_tree(rng, int(rng.integers(2, 15)))
            children = tree.children()
            prob = {tree.root: 1.0}
            total = 0.0
            stack = [tree.root]
            while stack:
                v = stack.pop()
                kids = children[v]
                if not kids:
                    total += prob[v]
                    continue
                for c in kids:
                    prob[c] = prob[v] / len(kids)
                    stack.append(c)
            assert total == pytest.approx(1.0, abs=1e-12)


class TestShapeVsOrderSensitivity:
    def test_shape_metrics_invariant_under_position_relabeling(self):
        rng = np.random.default_rng(31)
        tree = random_tree(rng, 10)
        n = len(tree)
        perm = rng.permutation(n) + 1
        remap = [0] * n
        for t in tree.nodes:
            remap[perm[t.index - 1] - 1] = 0 if t.head == 0 else int(perm[t.head - 1])
        shuffled = make_tree(remap)
        assert subtree_unevenness(shuffled) == pytest.approx(subtree_unevenness(tree))
        assert b2_index(shuffled) == pytest.approx(b2_index(tree))
        assert min_linear_arrangement(shuffled) == min_linear_arrangement(tree)

    def test_observed_length_depends_on_order(self):
        chain = make_tree([0, 1, 2, 3])     # path linearized in order
        twisted = make_tree([3, 4, 0, 1])   # same path shape, scrambled positions
        assert subtree_unevenness(twisted) == pytest.approx(subtree_unevenness(chain))
        assert b2_index(twisted) == pytest.approx(b2_index(chain))
        assert min_linear_arrangement(twisted) == min_linear_arrangement(chain) == 3
        assert total_dependency_length(twisted) == 7 != total_dependency_length(chain)

    def test_d_min_never_exceeds_d_obs(self):
        rng = np.random.default_rng(37)
        for _ in range(30):
            tree = random_tree(rng, int(rng.integers(2, 12)))
            assert min_linear_arrangement(tree) <= total_dependency_length(tree)


class TestAverages:
    def test_single_sentence_passthrough(self, worked_tree):
        metrics = compute_tree_metrics(worked_tree)
        avg = average_tree_metrics([metrics])
        assert avg.mean_mhd == metrics.mhd
        assert avg.mean_omega == metrics.omega
        assert avg.omega_defined_count == 1

    def test_mean_of_two_omegas(self, worked_tree):
        a = compute_tree_metrics(worked_tree)
        b = compute_tree_metrics(make_tree([0, 1, 2]))
        avg = average_tree_metrics([a, b])
        assert avg.mean_omega == pytest.approx((a.omega + b.omega) / 2)

    def test_undefined_omega_skipped(self, worked_tree):
        a = compute_tree_metrics(worked_tree)
        tiny = compute_tree_metrics(make_tree([0, 1]))
        assert tiny.omega is None
        avg = average_tree_metrics([a, tiny, a])
        assert avg.omega_defined_count == 2
        assert avg.mean_omega == pytest.approx(a.omega)
        assert avg.n_sentences == 3

    def test_no_sentences_raises(self):
        with pytest.raises(ValueError):
            average_tree_metrics([])
