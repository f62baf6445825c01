import math

import numpy as np
import pytest

from murbound import (BasisSpec, CovariantError, DensityOperator,
                      excited_operator, first_absolute_moment,
                      ground_operator, husimi, marginal_by_convolution,
                      momentum_density, noise_marginals,
                      observable_distance_covariant, optimal_operator,
                      position_density, random_density_matrix,
                      squeezed_operator, state_density_grid, state_operator,
                      wasserstein1_1d)

BASIS = BasisSpec(1, 64, 1.0, "full")


def embedded(matrix, size=64):
    out = np.zeros((size, size))
    out[:matrix.shape[0], :matrix.shape[1]] = matrix
    return out


class TestDensityOperator:
    def test_validation(self):
        with pytest.raises(CovariantError):
            DensityOperator(BASIS, np.eye(64))
        bad = embedded(np.diag([1.5, -0.5]))
        with pytest.raises(CovariantError):
            DensityOperator(BASIS, bad)
        with pytest.raises(CovariantError):
            DensityOperator(BASIS, np.eye(32) / 32.0)

    def test_state_builders(self):
        g = ground_operator(BASIS)
        assert g.matrix[0, 0] == 1.0
        e = excited_operator(3, BASIS)
        assert e.matrix[3, 3] == 1.0
        with pytest.raises(CovariantError):
            excited_operator(64, BASIS)
        sq = squeezed_operator(1.5, BASIS)
        assert np.trace(sq.matrix) == pytest.approx(1.0, abs=1e-12)
        with pytest.raises(CovariantError):
            squeezed_operator(-1.0, BASIS)

    def test_requires_full_sector(self):
        with pytest.raises(CovariantError):
            ground_operator(BasisSpec(1, 64, 1.0, "even"))


class TestDensities:
    def test_ground_position_density(self):
        x = np.linspace(-3, 3, 101)
        vals = position_density(ground_operator(BASIS), x)
        assert vals == pytest.approx(np.exp(-x ** 2) / math.sqrt(math.pi),
                                     abs=1e-13)

    def test_momentum_density_of_squeezed(self):
        # Dilation swaps the roles of position and momentum widths.
        lam = 1.5
        sq = squeezed_operator(lam, BASIS)
        p = np.linspace(-3, 3, 101)
        vals = momentum_density(sq, p)
        expect = lam * np.exp(-(lam * p) ** 2) / math.sqrt(math.pi)
        assert vals == pytest.approx(expect, abs=1e-10)

    def test_grid_densities_normalized(self):
        q, p = state_density_grid(excited_operator(2, BASIS))
        assert q.step * q.values.sum() == pytest.approx(1.0, abs=1e-9)
        assert p.step * p.values.sum() == pytest.approx(1.0, abs=1e-9)


class TestNoiseMarginals:
    def test_ground_state_noise(self):
        nm = noise_marginals(ground_operator(BASIS))
        x = nm.mQ.grid
        assert nm.mQ.values == pytest.approx(
            np.exp(-x ** 2) / math.sqrt(math.pi), abs=1e-10)
        assert first_absolute_moment(nm.mQ) == pytest.approx(
            1.0 / math.sqrt(math.pi), abs=1e-8)

    def test_first_excited_unchanged_by_parity(self):
        m = excited_operator(1, BASIS)
        nm = noise_marginals(m)
        x = nm.mQ.grid
        direct = position_density(m, x)
        assert nm.mQ.values == pytest.approx(direct, abs=1e-12)

    def test_parity_twist_matters(self):
        # Coherent-like superposition with <h0|m|h1> nonzero: conjugation
        # by parity reflects the density, so dropping it would be visible.
        coeff = np.zeros(64)
        coeff[0] = coeff[1] = 1.0
        m = state_operator(coeff, BASIS)
        nm = noise_marginals(m)
        x = nm.mQ.grid
        direct = position_density(m, x)
        assert np.abs(nm.mQ.values - direct).max() > 0.1
        assert nm.mQ.values == pytest.approx(direct[::-1], abs=1e-12)


class TestConvolutionMarginal:
    def test_gaussian_doubling(self):
        g = ground_operator(BASIS)
        ideal, _ = state_density_grid(g)
        noise = noise_marginals(g).mQ
        out = marginal_by_convolution(ideal, noise)
        x = out.grid
        expect = np.exp(-x ** 2 / 2.0) / math.sqrt(2.0 * math.pi)
        assert np.abs(out.values - expect).max() < 1e-6

    def test_noise_bound_and_tightness(self):
        # The blur distance never exceeds the noise moment and climbs
        # toward it as the state's position density narrows to a point.
        wide = BasisSpec(1, 256, 1.0, "full")
        noise = noise_marginals(ground_operator(wide)).mQ
        bound = first_absolute_moment(noise)
        dists = []
        for lam in (1.0, 0.6, 0.4):
            ideal, _ = state_density_grid(squeezed_operator(lam, wide))
            blurred = marginal_by_convolution(ideal, noise)
            dist = wasserstein1_1d(ideal, blurred)
            assert dist <= bound + 1e-9
            dists.append(dist)
        assert dists[0] < dists[1] < dists[2] < bound


class TestObservableDistance:
    def test_ground(self):
        pair = observable_distance_covariant(ground_operator(BASIS))
        root = 1.0 / math.sqrt(math.pi)
        assert pair.deltaQ == pytest.approx(root, abs=1e-12)
        assert pair.deltaP == pytest.approx(root, abs=1e-12)

    def test_squeezed_scaling(self):
        lam = 1.5
        pair = observable_distance_covariant(squeezed_operator(lam, BASIS))
        root = 1.0 / math.sqrt(math.pi)
        assert pair.deltaQ == pytest.approx(lam * root, abs=1e-10)
        assert pair.deltaP == pytest.approx(root / lam, abs=1e-10)
        assert pair.product == pytest.approx(1.0 / math.pi, abs=1e-10)

    def test_optimal_attains_truncated_constant(self, ground_d1):
        m = optimal_operator(BasisSpec(1, 256, 1.0, "full"))
        pair = observable_distance_covariant(m)
        assert pair.product == pytest.approx(ground_d1.C, abs=1e-12)

    def test_grid_operator_consistency(self):
        rng = np.random.default_rng(29)
        for _ in range(10):
            m = DensityOperator(BASIS,
                                embedded(random_density_matrix(16, 3, rng)))
            pair = observable_distance_covariant(m)
            nm = noise_marginals(m)
            assert abs(first_absolute_moment(nm.mQ)
                       - pair.deltaQ) <= 1e-6
            assert abs(first_absolute_moment(nm.mP)
                       - pair.deltaP) <= 1e-6


class TestHusimi:
    def test_coherent_peak_and_mass(self):
        g = ground_operator(BASIS)
        h = husimi(g, g)
        assert h.total_mass == pytest.approx(1.0, abs=1e-4)
        peak = np.unravel_index(np.argmax(h.values), h.values.shape)
        assert abs(h.p_grid[peak[0]]) <= h.p_step / 2
        assert abs(h.q_grid[peak[1]]) <= h.q_step / 2
        # Coherent-state outcome density is e^{-(p^2+q^2)/2} at the origin
        # peak value 1.
        assert h.values.max() == pytest.approx(1.0, abs=1e-8)

    def test_marginal_identity(self):
        m = ground_operator(BASIS)
        noise = noise_marginals(m)
        super_state = np.zeros(64)
        super_state[0] = super_state[2] = 1.0
        for rho in (ground_operator(BASIS), excited_operator(1, BASIS),
                    state_operator(super_state, BASIS)):
            h = husimi(rho, m)
            ideal_q, ideal_p = state_density_grid(rho)
            conv_q = marginal_by_convolution(ideal_q, noise.mQ)
            conv_p = marginal_by_convolution(ideal_p, noise.mP)
            for marg, conv in ((h.q_marginal(), conv_q),
                               (h.p_marginal(), conv_p)):
                interp = np.interp(marg.grid, conv.grid, conv.values)
                assert np.abs(marg.values - interp).max() <= 2e-4

    def test_misaligned_q_grid_rejected(self):
        g = ground_operator(BASIS)
        with pytest.raises(CovariantError):
            husimi(g, g, q_origin=-8.0 + 1e-3)

    def test_mismatched_bases_rejected(self):
        g = ground_operator(BASIS)
        other = ground_operator(BasisSpec(1, 32, 1.0, "full"))
        with pytest.raises(CovariantError):
            husimi(g, other)

    def test_rank_cap(self):
        m = DensityOperator(BASIS, embedded(np.eye(16) / 16.0))
        with pytest.raises(CovariantError):
            husimi(ground_operator(BASIS), m)
