import math
import unittest

import numpy as np

from sonclust.core import PointCloud, ProblemParams, ShapeMismatchError, objective_value
from sonclust.solver import SolverOptions, convexity_gap, group_soft_threshold, incidence_matrix, solve
from sonclust.weights import TruncationMode, TruncationPolicy, build_weights

TIGHT = SolverOptions(eps_primal=1e-10, eps_dual=1e-10, max_iters=50000)


def _solve(points, lam, gamma, opts=TIGHT, policy=None):
    cloud = PointCloud(points)
    params = ProblemParams(lam=lam, gamma=gamma)
    graph = build_weights(cloud, params, policy)
    y, report = solve(cloud, params, graph, opts)
    return cloud, params, graph, y, report


class TestSolver(unittest.TestCase):
    """Tests for the ADMM solver and its certificates."""
    def setUp(self):
        self.points = np.random.default_rng(11).normal(size=(40, 2))

    def test_lambda_zero_returns_data(self):
        cloud, params, graph, y, report = _solve(self.points, 0.0, 2.0)
        np.testing.assert_array_equal(y.values, cloud.points)
        self.assertEqual(report.iterations, 0)
        self.assertEqual(report.distance_certificate, 0.0)

    def test_lambda_zero_random_clouds(self):
        rng = np.random.default_rng(23)
        policy = TruncationPolicy(mode=TruncationMode.explicit, omega=0.2)
        for _ in range(25):
            n, d = int(rng.integers(2, 1001)), int(rng.integers(1, 6))
            points = rng.uniform(-1.0, 1.0, size=(n, d)) * rng.uniform(0.1, 10.0)
            cloud, _, _, y, report = _solve(points, 0.0, float(rng.uniform(1.0, 20.0)), policy=policy)
            np.testing.assert_array_equal(y.values, cloud.points)
            self.assertEqual(report.iterations, 0)
            self.assertEqual(report.objective, 0.0)

    def test_edgeless_graph_returns_data(self):
        policy = TruncationPolicy(mode=TruncationMode.explicit, omega=1e-9)
        cloud, _, graph, y, report = _solve(self.points, 5.0, 2.0, policy=policy)
        self.assertEqual(graph.n_edges, 0)
        np.testing.assert_array_equal(y.values, cloud.points)

    def test_two_point_closed_form(self):
        w = math.exp(-2.0)
        for fusion in (0.5, 1.0, 2.0, 4.0):
            _, _, _, y, report = _solve([[-1.0], [1.0]], fusion / w, 1.0)
            # shrink toward each other by fusion / 2, fused once fusion >= 2
            a = max(0.0, 1.0 - fusion / 2.0)
            np.testing.assert_allclose(y.values.ravel(), [-a, a], atol=1e-7)
            exact = np.array([[-a], [a]])
            gap = float(np.mean(np.sum((y.values - exact) ** 2, axis=1)))
            self.assertLessEqual(gap, report.distance_certificate + 1e-12)

    def test_dual_bound_below_objective(self):
        cloud, params, graph, y, report = _solve(self.points, 1.0, 3.0)
        self.assertTrue(report.converged)
        self.assertLessEqual(report.dual_bound, report.objective + 1e-12)
        self.assertLess(report.distance_certificate, 1e-6)
        self.assertAlmostEqual(report.objective, objective_value(cloud, params, graph, y))

    def test_rho_does_not_change_minimizer(self):
        ys = []
        for rho in (0.3, 1.0, 3.0):
            opts = TIGHT.model_copy(update={"rho": rho})
            ys.append(_solve(self.points, 1.0, 3.0, opts=opts)[3].values)
        np.testing.assert_allclose(ys[0], ys[1], atol=1e-5)
        np.testing.assert_allclose(ys[1], ys[2], atol=1e-5)

    def test_translation_equivariance(self):
        shift = np.array([10.0, -3.0])
        y0 = _solve(self.points, 1.0, 3.0)[3].values
        y1 = _solve(self.points + shift, 1.0, 3.0)[3].values
        np.testing.assert_allclose(y1, y0 + shift, atol=1e-5)

    def test_permutation_equivariance(self):
        perm = np.random.default_rng(5).permutation(len(self.points))
        y0 = _solve(self.points, 1.0, 3.0)[3].values
        y1 = _solve(self.points[perm], 1.0, 3.0)[3].values
        np.testing.assert_allclose(y1, y0[perm], atol=1e-5)

    def test_deterministic(self):
        a = _solve(self.points, 1.0, 3.0, opts=SolverOptions())
        b = _solve(self.points, 1.0, 3.0, opts=SolverOptions())
        np.testing.assert_array_equal(a[3].values, b[3].values)
        self.assertEqual(a[4].iterations, b[4].iterations)

    def test_convexity_gap(self):
        rng = np.random.default_rng(0)
        for _trial in range(10):
            pts = rng.normal(size=(rng.integers(2, 30), rng.integers(1, 4)))
            cloud = PointCloud(pts)
            params = ProblemParams(lam=float(rng.uniform(0, 5)), gamma=float(rng.uniform(0.5, 5)))
            graph = build_weights(cloud, params)
            for _ in range(100):
                y, v = rng.normal(size=pts.shape), rng.normal(size=pts.shape)
                J = objective_value(cloud, params, graph, y)
                self.assertGreaterEqual(convexity_gap(cloud, params, graph, y, v), -1e-9 * (1.0 + J))

    def test_certificate_reference(self):
        opts = SolverOptions(certificate_reference=0.0)
        _, _, _, _, report = _solve(self.points, 1.0, 3.0, opts=opts)
        self.assertAlmostEqual(report.distance_certificate, 2.0 * report.objective)

    def test_shape_mismatch(self):
        cloud = PointCloud(self.points)
        params = ProblemParams(lam=1.0, gamma=3.0)
        graph = build_weights(PointCloud(self.points[:10]), params)
        with self.assertRaises(ShapeMismatchError):
            solve(cloud, params, graph)

    def test_group_soft_threshold(self):
        v = np.array([[3.0, 4.0], [0.6, 0.8], [0.0, 0.0]])
        out = group_soft_threshold(v, np.array([1.0, 1.0, 1.0]))
        np.testing.assert_allclose(out[0], [2.4, 3.2])
        np.testing.assert_array_equal(out[1], [0.0, 0.0])
        np.testing.assert_array_equal(out[2], [0.0, 0.0])

    def test_incidence_matrix(self):
        cloud = PointCloud([[0.0], [1.0], [3.0]])
        graph = build_weights(cloud, ProblemParams(lam=1.0, gamma=1.0))
        L = incidence_matrix(graph)
        np.testing.assert_array_equal(L @ cloud.points, [[-1.0], [-3.0], [-2.0]])


if __name__ == "__main__":
    unittest.main()
