import math

import numpy as np
import pytest
from conftest import random_discrete_1d, transport_oracle

from murbound import (CDF, DiscreteMeasure, GridDensity, MeasureError,
                      TransportPlan, convolve, discrete_cdf,
                      first_absolute_moment, kantorovich_lp, monge_cost,
                      wasserstein1_1d)


def delta(x):
    return DiscreteMeasure.point(x)


class TestTypes:
    def test_weights_must_normalize(self):
        with pytest.raises(MeasureError):
            DiscreteMeasure([[0.0]], [0.5])

    def test_weights_must_be_nonnegative(self):
        with pytest.raises(MeasureError):
            DiscreteMeasure([[0.0], [1.0]], [1.5, -0.5])

    def test_coincident_points_merge(self):
        mu = DiscreteMeasure([[1.0], [1.0 + 1e-14], [2.0]],
                             [0.25, 0.25, 0.5])
        assert len(mu.weights) == 2
        assert mu.weights == pytest.approx([0.5, 0.5])

    def test_grid_density_invariants(self):
        with pytest.raises(MeasureError):
            GridDensity(0.0, 0.5, [1.0, 1.0, 1.0])
        with pytest.raises(MeasureError):
            GridDensity(0.0, 1.0, [2.0, -1.0])
        g = GridDensity.from_samples(0.0, 0.5, [1.0, 2.0, 1.0])
        assert g.step * g.values.sum() == pytest.approx(1.0, abs=1e-12)

    def test_cdf_invariants(self):
        with pytest.raises(MeasureError):
            CDF([0.0, 0.0], [0.5, 1.0])
        with pytest.raises(MeasureError):
            CDF([0.0, 1.0], [0.5, 0.9])
        c = discrete_cdf(DiscreteMeasure([[0.0], [1.0]], [0.25, 0.75]))
        assert c.cumulative == pytest.approx([0.25, 1.0])

    def test_plan_marginal_check(self):
        mu = DiscreteMeasure([[0.0], [1.0]], [0.5, 0.5])
        with pytest.raises(MeasureError):
            TransportPlan(mu, delta(0.5), np.array([[0.9], [0.1]]))


class TestWasserstein1d:
    def test_point_measures(self):
        assert wasserstein1_1d(delta(0.0), delta(3.0)) == pytest.approx(3.0)

    def test_identity(self):
        mu = DiscreteMeasure([[0.0], [2.0]], [0.3, 0.7])
        assert wasserstein1_1d(mu, mu) == 0.0

    def test_split_example(self):
        mu = DiscreteMeasure([[0.0], [1.0]], [0.5, 0.5])
        assert wasserstein1_1d(mu, delta(0.5)) == pytest.approx(0.5)

    def test_matches_oracle_small(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            mu1 = random_discrete_1d(rng, max_atoms=4)
            mu2 = random_discrete_1d(rng, max_atoms=4)
            assert wasserstein1_1d(mu1, mu2) == pytest.approx(
                transport_oracle(mu1, mu2), abs=1e-10)

    def test_metric_axioms(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            a, b, c = (random_discrete_1d(rng) for _ in range(3))
            dab = wasserstein1_1d(a, b)
            dba = wasserstein1_1d(b, a)
            assert dab >= 0
            assert dab == pytest.approx(dba, abs=1e-12)
            assert dab <= wasserstein1_1d(a, c) + wasserstein1_1d(c, b) + 1e-9

    def test_grid_distance(self):
        x = np.arange(-8.0, 8.0, 1.0 / 32)
        g1 = GridDensity.from_samples(-8.0, 1.0 / 32, np.exp(-x ** 2))
        g2 = GridDensity.from_samples(-8.0, 1.0 / 32,
                                      np.exp(-(x - 1.0) ** 2))
        # Translation by 1 moves every quantile by 1.
        assert wasserstein1_1d(g1, g2) == pytest.approx(1.0, abs=1e-4)

    def test_rejects_mixed_representations(self):
        g = GridDensity.from_samples(0.0, 1.0, [1.0])
        with pytest.raises(MeasureError):
            wasserstein1_1d(delta(0.0), g)

    def test_rejects_multidimensional(self):
        with pytest.raises(MeasureError):
            wasserstein1_1d(delta([0.0, 0.0]), delta([1.0, 1.0]))


class TestKantorovich:
    def test_point_to_point(self):
        value, plan = kantorovich_lp(delta(0.0), delta(3.0))
        assert value == pytest.approx(3.0)
        assert plan.matrix.ravel() == pytest.approx([1.0])

    def test_split_plan(self):
        mu = DiscreteMeasure([[0.0], [1.0]], [0.5, 0.5])
        value, plan = kantorovich_lp(mu, delta(0.5))
        assert value == pytest.approx(0.5)
        assert plan.matrix.ravel() == pytest.approx([0.5, 0.5])

    def test_euclidean_2d(self):
        value, _ = kantorovich_lp(delta([0.0, 0.0]), delta([3.0, 4.0]))
        assert value == pytest.approx(5.0)

    def test_duality_with_cdf_formula(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            mu1 = random_discrete_1d(rng)
            mu2 = random_discrete_1d(rng)
            value, _ = kantorovich_lp(mu1, mu2)
            assert value == pytest.approx(wasserstein1_1d(mu1, mu2),
                                          abs=1e-9)

    def test_oracle_2d(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            n1, n2 = rng.integers(1, 5, size=2)
            w1 = rng.uniform(0.1, 1, n1)
            w2 = rng.uniform(0.1, 1, n2)
            mu1 = DiscreteMeasure(rng.uniform(-3, 3, (n1, 2)),
                                  w1 / w1.sum())
            mu2 = DiscreteMeasure(rng.uniform(-3, 3, (n2, 2)),
                                  w2 / w2.sum())
            value, _ = kantorovich_lp(mu1, mu2)
            assert value == pytest.approx(transport_oracle(mu1, mu2),
                                          abs=1e-9)

    def test_feasible_plans_bound_from_above(self):
        mu1 = DiscreteMeasure([[0.0], [1.0]], [0.5, 0.5])
        mu2 = DiscreteMeasure([[0.5], [2.0]], [0.75, 0.25])
        value, _ = kantorovich_lp(mu1, mu2)
        independent = TransportPlan(mu1, mu2,
                                    np.outer(mu1.weights, mu2.weights))
        assert monge_cost(independent) >= value - 1e-12

    def test_support_cap(self):
        n = 513
        w = np.full(n, 1.0 / n)
        mu = DiscreteMeasure(np.arange(n, dtype=float)[:, None], w)
        with pytest.raises(MeasureError):
            kantorovich_lp(mu, mu)


class TestMongeCost:
    def test_identity_plan(self):
        mu = DiscreteMeasure([[0.0], [1.0]], [0.5, 0.5])
        plan = TransportPlan(mu, mu, np.diag(mu.weights))
        assert monge_cost(plan) == 0.0

    def test_single_route(self):
        plan = TransportPlan(delta(0.0), delta(3.0), np.array([[1.0]]))
        assert monge_cost(plan) == pytest.approx(3.0)

    def test_metric_choices(self):
        plan = TransportPlan(delta([0.0, 0.0]), delta([3.0, 4.0]),
                             np.array([[1.0]]))
        assert monge_cost(plan, "euclidean") == pytest.approx(5.0)
        assert monge_cost(plan, "l1") == pytest.approx(7.0)
        assert monge_cost(plan, "linf") == pytest.approx(4.0)
        with pytest.raises(MeasureError):
            monge_cost(plan, "hamming")


class TestConvolve:
    def test_point_shifts(self):
        out = convolve(delta(1.5), delta(-0.5))
        assert out.points.ravel() == pytest.approx([1.0])

    def test_identity_element(self):
        mu = DiscreteMeasure([[0.0], [2.0]], [0.25, 0.75])
        out = convolve(mu, delta(0.0))
        assert out.points == pytest.approx(mu.points)
        assert out.weights == pytest.approx(mu.weights)

    def test_uniform_pair(self):
        u = DiscreteMeasure([[0.0], [1.0]], [0.5, 0.5])
        out = convolve(u, u)
        assert out.points.ravel() == pytest.approx([0.0, 1.0, 2.0])
        assert out.weights == pytest.approx([0.25, 0.5, 0.25])

    def test_grid_first_moment_adds(self):
        x = np.arange(-8.0, 8.0, 1.0 / 32)
        g1 = GridDensity.from_samples(-8.0, 1.0 / 32,
                                      np.exp(-(x - 0.5) ** 2))
        g2 = GridDensity.from_samples(-8.0, 1.0 / 32,
                                      np.exp(-(x - 1.0) ** 2))
        out = convolve(g1, g2)
        mean = out.step * np.dot(out.grid, out.values)
        assert mean == pytest.approx(1.5, abs=1e-6)

    def test_convolution_bound(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            mu = random_discrete_1d(rng)
            nu = random_discrete_1d(rng)
            dist = wasserstein1_1d(mu, convolve(mu, nu))
            assert dist <= first_absolute_moment(nu) + 1e-9

    def test_convolution_bound_tight_for_points(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            mu = delta(rng.uniform(-3, 3))
            nu = random_discrete_1d(rng)
            dist = wasserstein1_1d(mu, convolve(mu, nu))
            assert dist == pytest.approx(first_absolute_moment(nu),
                                         abs=1e-6)


class TestFirstAbsoluteMoment:
    def test_point(self):
        assert first_absolute_moment(delta(3.0)) == pytest.approx(3.0)

    def test_symmetric_pair(self):
        mu = DiscreteMeasure([[-1.0], [1.0]], [0.5, 0.5])
        assert first_absolute_moment(mu) == pytest.approx(1.0)

    def test_grid_gaussian(self):
        x = np.arange(-10.0, 10.0 + 1.0 / 64, 1.0 / 64)
        g = GridDensity.from_samples(-10.0, 1.0 / 64, np.exp(-x ** 2))
        assert first_absolute_moment(g) == pytest.approx(
            1.0 / math.sqrt(math.pi), abs=1e-8)
