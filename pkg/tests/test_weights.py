import math
import unittest

import numpy as np
from pydantic import ValidationError

from sonclust.core import PointCloud, ProblemParams, WeightMode
from sonclust.weights import (TruncationMode, TruncationPolicy, build_weights, diameter, diameter_estimate,
                              truncation_error_bound, truncation_radius)


class TestWeights(unittest.TestCase):
    """Tests for the weight graph construction."""
    def setUp(self):
        rng = np.random.default_rng(7)
        self.cloud = PointCloud(rng.random((300, 2)))
        self.params = ProblemParams(lam=1.0, gamma=4.0)

    def test_grid_matches_all_pairs(self):
        policy = TruncationPolicy(mode=TruncationMode.explicit, omega=0.2)
        grid = build_weights(self.cloud, self.params, policy, use_grid=True)
        brute = build_weights(self.cloud, self.params, policy, use_grid=False)
        for attr in ("m", "n", "dist", "weight"):
            np.testing.assert_array_equal(getattr(grid, attr), getattr(brute, attr))
        self.assertTrue(np.all(grid.dist <= 0.2))

    def test_grid_matches_all_pairs_random_clouds(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            n, d = int(rng.integers(2, 501)), int(rng.integers(1, 4))
            cloud = PointCloud(rng.normal(size=(n, d)))
            policy = TruncationPolicy(mode=TruncationMode.explicit, omega=float(rng.uniform(0.05, 1.0)))
            grid = build_weights(cloud, self.params, policy, use_grid=True)
            brute = build_weights(cloud, self.params, policy, use_grid=False)
            for attr in ("m", "n", "dist", "weight"):
                np.testing.assert_array_equal(getattr(grid, attr), getattr(brute, attr))

    def test_edge_at_exact_radius(self):
        cloud = PointCloud([[0.0], [0.5], [1.0]])
        policy = TruncationPolicy(mode=TruncationMode.explicit, omega=0.5)
        graph = build_weights(cloud, self.params, policy)
        self.assertEqual(list(zip(graph.m.tolist(), graph.n.tolist())), [(0, 1), (1, 2)])

    def test_distance_filter(self):
        cloud = PointCloud([[0.0], [1.0], [10.0]])
        graph = build_weights(cloud, self.params, TruncationPolicy(mode=TruncationMode.explicit, omega=2.0))
        self.assertEqual(graph.n_edges, 1)
        self.assertEqual((int(graph.m[0]), int(graph.n[0])), (0, 1))

    def test_truncated_is_subgraph(self):
        policy = TruncationPolicy(mode=TruncationMode.explicit, omega=0.15)
        part = build_weights(self.cloud, self.params, policy)
        full = build_weights(self.cloud, self.params)
        keys = full.m * self.cloud.n + full.n
        idx = np.searchsorted(keys, part.m * self.cloud.n + part.n)
        np.testing.assert_array_equal(full.weight[idx], part.weight)

    def test_untruncated_is_complete_and_sorted(self):
        cloud = PointCloud(self.cloud.points[:20])
        graph = build_weights(cloud, self.params)
        self.assertEqual(graph.n_edges, 20 * 19 // 2)
        keys = graph.m * 20 + graph.n
        self.assertTrue(np.all(np.diff(keys) > 0))
        self.assertTrue(np.all(graph.m < graph.n))

    def test_weight_values(self):
        cloud = PointCloud([[0.0, 0.0], [3.0, 4.0]])
        graph = build_weights(cloud, ProblemParams(lam=1.0, gamma=2.0))
        self.assertAlmostEqual(graph.weight[0], 2.0 ** 3 * math.exp(-10.0), places=15)
        line = build_weights(PointCloud([[0.0], [1.0]]), ProblemParams(lam=1.0, gamma=2.0))
        self.assertAlmostEqual(line.weight[0], 4.0 * math.exp(-2.0), places=15)
        uniform = build_weights(cloud, ProblemParams(lam=1.0, gamma=2.0, weight_mode=WeightMode.uniform))
        self.assertEqual(uniform.weight[0], 8.0)

    def test_underflowed_weights_keep_their_edge(self):
        cloud = PointCloud([[0.0], [10.0]])
        graph = build_weights(cloud, ProblemParams(lam=1.0, gamma=1000.0))
        self.assertEqual(graph.n_edges, 1)
        self.assertEqual(graph.weight[0], 0.0)

    def test_truncation_radius(self):
        self.assertAlmostEqual(truncation_radius(math.e, 2), (2 + 4.0 / 3.0) / math.e)
        self.assertAlmostEqual(truncation_radius(math.e ** 2, 1), (7.0 / 3.0) * 2.0 / math.e ** 2)
        self.assertAlmostEqual(truncation_error_bound(1.0, 1.0, 2.0, 1, 1.0), 8.0 * math.exp(-2.0))
        self.assertEqual(truncation_error_bound(3.0, 0.0, 2.0, 1, 1.0), 0.0)
        with self.assertRaises(ValueError):
            truncation_radius(1.0, 2)
        gamma, d = 50.0, 2
        omega = truncation_radius(gamma, d)
        # at the cutoff the bound collapses to 2 M lambda gamma^(-1/3)
        self.assertAlmostEqual(truncation_error_bound(1.0, 1.0, gamma, d, omega), 2.0 * gamma ** (-1.0 / 3.0))

    def test_paper_cutoff_policy(self):
        policy = TruncationPolicy(mode=TruncationMode.paper_cutoff)
        graph = build_weights(self.cloud, ProblemParams(lam=1.0, gamma=20.0), policy)
        self.assertAlmostEqual(graph.omega, truncation_radius(20.0, 2))

    def test_policy_validation(self):
        with self.assertRaises(ValidationError):
            TruncationPolicy(mode=TruncationMode.explicit)
        params = ProblemParams(lam=1.0, gamma=20.0, omega=0.1)
        with self.assertRaises(ValueError):
            build_weights(self.cloud, params, TruncationPolicy(mode=TruncationMode.paper_cutoff))
        self.assertEqual(build_weights(self.cloud, params).omega, 0.1)

    def test_diameter(self):
        cloud = PointCloud([[0.0, 0.0], [3.0, 4.0], [1.0, 1.0]])
        self.assertEqual(diameter(cloud), 5.0)
        est = diameter_estimate(cloud, exact_limit=2)
        self.assertFalse(est.exact)
        self.assertGreaterEqual(est.value, 5.0)
        self.assertEqual(diameter(PointCloud([[1.0, 2.0]])), 0.0)


if __name__ == "__main__":
    unittest.main()
