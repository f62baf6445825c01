"""Measurement uncertainty bound toolkit.

Computes the optimal constant C in the joint position-momentum
measurement uncertainty product bound for any dimension, together with
the supporting calculus: Wasserstein-1 distances, oscillator-basis
matrix elements of |Q| and |P|, and covariant observable simulation.
"""

from .covariant import (CovariantError, DensityOperator, NoiseDensity,
                        PhaseSpaceDensity, excited_operator, ground_operator,
                        husimi, marginal_by_convolution, momentum_density,
                        noise_marginals, observable_distance_covariant,
                        optimal_operator, position_density, squeezed_operator,
                        state_density_grid, state_operator)
from .oscillator import (BasisMatrix, BasisSpec, abs_p_matrix, abs_q_matrix,
                         fourier_phase_matrix, fourier_signs, gram_matrix,
                         hermite_function, hermite_values, radial_values)
from .quadrature import (HalflineRule, QuadratureError,
                         gauss_laguerre_expfree, gauss_quadrature_halfline)
from .spectral import (GroundStateResult, KSpec, UncertaintyPair,
                       WavefunctionTable, admissible_region,
                       coherent_constant, ground_state_wavefunction, k_matrix,
                       optimal_constant, random_density_matrix,
                       symmetric_eigen_lowest, uncertainty_product_check)
from .transport import (CDF, DiscreteMeasure, GridDensity, MeasureError,
                        TransportPlan, convolve, discrete_cdf,
                        first_absolute_moment, kantorovich_lp, monge_cost,
                        wasserstein1_1d)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
