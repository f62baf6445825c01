"""Variational ground state of K = a|Q| + b|P| and the optimal constant.

The constant C in the uncertainty product bound is E0**2 / (4*a*b*hbar),
where E0 is the bottom of the spectrum of K.  The basis carries an
adapted length scale sqrt(b/a), under which the truncated K becomes
sqrt(a*b*hbar) times a fixed dimensionless matrix; C is then exactly
independent of a, b and hbar, and E0 scales as sqrt(a*b*hbar).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh

from .oscillator import (BasisMatrix, BasisSpec, abs_q_matrix,
                         fourier_phase_matrix, hermite_values, radial_values)
from .quadrature import gauss_quadrature_halfline
from .transport import GridDensity


@dataclass(frozen=True)
class KSpec:
    """Weights a, b of K = a|Q| + b|P| over a truncated basis."""

    a: float = 1.0
    b: float = 1.0
    basis: BasisSpec = field(default_factory=BasisSpec)

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ValueError(f"a and b must be positive, got {self.a}, {self.b}")


@dataclass(frozen=True)
class GroundStateResult:
    """Lowest eigenpair of truncated K and the derived constant C."""

    spec: KSpec
    E0: float
    C: float
    coefficients: np.ndarray
    convergence: tuple
    gap: float
    residual: float

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        object.__setattr__(self, "coefficients", c)
        if abs(np.linalg.norm(c) - 1.0) > 1e-12:
            raise ValueError("ground-state coefficients must be unit norm")
        if self.E0 <= 0:
            raise ValueError(f"E0 must be positive, got {self.E0}")

    def to_json_dict(self) -> dict:
        basis = self.spec.basis
        return {
            "schema": 1,
            "dimension": basis.dimension,
            "a": self.spec.a,
            "b": self.spec.b,
            "hbar": basis.hbar,
            "N": basis.size,
            "sector": basis.sector,
            "E0": self.E0,
            "C": self.C,
            "gap": self.gap,
            "residual": self.residual,
            "convergence": [[n, e] for n, e in self.convergence],
            "coefficients": list(self.coefficients),
        }


@dataclass(frozen=True)
class UncertaintyPair:
    """A point (deltaQ, deltaP) = (tr(m|Q|), tr(m|P|)) of the admissible
    region."""

    deltaQ: float
    deltaP: float

    @property
    def product(self) -> float:
        return self.deltaQ * self.deltaP


def symmetric_eigen_lowest(matrix: BasisMatrix,
                           k: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """k smallest eigenvalues (ascending) and orthonormal eigenvectors."""
    m = matrix.entries
    if not 1 <= k <= m.shape[0]:
        raise ValueError(f"k must be in [1, {m.shape[0]}], got {k}")
    vals, vecs = eigh(m, subset_by_index=(0, k - 1), check_finite=False)
    scale = np.abs(m).max()
    residual = np.abs(m @ vecs - vecs * vals).max()
    if residual > 1e-10 * max(scale, 1.0):
        raise RuntimeError(
            f"eigensolver residual {residual:.3e} exceeds tolerance")
    return vals, vecs


def k_matrix(spec: KSpec) -> BasisMatrix:
    """Matrix of K = a|Q| + b|P| in the length-scale-adapted basis.

    With basis scale sqrt(b/a) both terms carry the same prefactor
    sqrt(a*b*hbar), multiplying the dimensionless |Q| matrix and its
    Fourier conjugate.
    """
    base = abs_q_matrix(BasisSpec(spec.basis.dimension, spec.basis.size,
                                  1.0, spec.basis.sector))
    q = base.entries
    p = q * fourier_phase_matrix(spec.basis)
    factor = math.sqrt(spec.a * spec.b * spec.basis.hbar)
    return BasisMatrix(spec=spec.basis, entries=factor * (q + p), label="K")


def optimal_constant(spec: KSpec) -> GroundStateResult:
    """Ground state of truncated K and the constant C = E0**2/(4*a*b*hbar).

    Records a convergence trace over the truncation ladder N/4, N/2, N;
    the returned value is the plain N-point Ritz value, no extrapolation.
    """
    n = spec.basis.size
    ladder = sorted({max(n // 4, 2), max(n // 2, 2), n})
    trace = []
    for size in ladder[:-1]:
        sub = KSpec(spec.a, spec.b, spec.basis.with_size(size))
        vals, _ = symmetric_eigen_lowest(k_matrix(sub), 1)
        trace.append((size, float(vals[0])))
    kmat = k_matrix(spec)
    vals, vecs = symmetric_eigen_lowest(kmat, 2)
    e0 = float(vals[0])
    trace.append((n, e0))
    coeff = vecs[:, 0]
    if coeff[np.argmax(np.abs(coeff))] < 0:
        coeff = -coeff
    residual = float(np.linalg.norm(kmat.entries @ coeff - e0 * coeff))
    return GroundStateResult(
        spec=spec,
        E0=e0,
        C=e0 * e0 / (4.0 * spec.a * spec.b * spec.basis.hbar),
        coefficients=coeff,
        convergence=tuple(trace),
        gap=float(vals[1] - vals[0]),
        residual=residual,
    )


def coherent_constant(d: int, hbar: float = 1.0) -> float:
    """Uncertainty product of the oscillator ground state: the square of
    its mean |position|, computed by half-line quadrature (dimensionless,
    so independent of hbar)."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    del hbar  # C' is dimensionless; the moments each scale as sqrt(hbar).
    rule = gauss_quadrature_halfline(d, 64)
    # Ground-state density is pi**(-d/2) e^{-r^2}; both integrals carry the
    # weight r^(d-1) e^{-r^2}, so the mean is a ratio of plain moments.
    w = rule.weights
    mean_r = float(np.dot(w, rule.nodes) / w.sum())
    return mean_r * mean_r


@dataclass(frozen=True)
class WavefunctionTable:
    """Ground-state wavefunction sampled on a uniform grid."""

    x: np.ndarray
    psi: np.ndarray
    density: GridDensity
    gaussian_overlap: float


def ground_state_wavefunction(result: GroundStateResult,
                              origin: float = -12.0, step: float = 1.0 / 64,
                              count: int = 1537) -> WavefunctionTable:
    """Synthesize psi = sum_k c_k phi_k on a grid, with |psi|^2 density and
    the overlap against the oscillator ground state.

    For dimension 1 the grid covers x (even sector: phi_k = h_{2k}); for
    the radial sector it covers r >= 0.
    """
    basis = result.spec.basis
    scale = math.sqrt(result.spec.b / result.spec.a * basis.hbar)
    x = origin + step * np.arange(count)
    u = x / scale
    n = basis.size
    if basis.sector == "even":
        table = hermite_values(2 * (n - 1) + 1, u)[::2]
        measure = np.ones_like(x)
        norm = math.sqrt(scale)
    elif basis.sector == "full":
        table = hermite_values(n, u)
        measure = np.ones_like(x)
        norm = math.sqrt(scale)
    else:
        if origin < 0:
            raise ValueError("radial wavefunction needs a grid on r >= 0")
        table = radial_values(n, u, basis.dimension)
        measure = x ** (basis.dimension - 1)
        norm = scale ** (basis.dimension / 2.0)
    psi = (result.coefficients @ table) / norm
    weighted = psi * psi * measure
    mass = step * weighted.sum()
    if abs(mass - 1.0) > 1e-6:
        raise RuntimeError(
            f"grid too coarse or narrow: |psi|^2 mass {mass!r}")
    overlap = step * np.sum(psi * (table[0] / norm) * measure)
    return WavefunctionTable(x=x, psi=psi,
                             density=GridDensity.from_samples(
                                 origin, step, weighted),
                             gaussian_overlap=float(abs(overlap)))


def uncertainty_product_check(m: np.ndarray, spec: KSpec) -> UncertaintyPair:
    """(tr(m|Q|), tr(m|P|)) for a density matrix m in the truncated basis."""
    m = np.asarray(m, dtype=float)
    n = spec.basis.size
    if m.shape != (n, n):
        raise ValueError(f"density matrix shape {m.shape}, expected {(n, n)}")
    if abs(np.trace(m) - 1.0) > 1e-10:
        raise ValueError(f"density matrix trace {np.trace(m)!r}, expected 1")
    low = np.linalg.eigvalsh(m)[0]
    if low < -1e-10:
        raise ValueError(f"density matrix has negative eigenvalue {low}")
    q = abs_q_matrix(spec.basis).entries
    p = q * fourier_phase_matrix(spec.basis)
    return UncertaintyPair(deltaQ=float(np.sum(m * q)),
                           deltaP=float(np.sum(m * p)))


def random_density_matrix(size: int, rank: int,
                          rng: np.random.Generator) -> np.ndarray:
    """Wishart-style random density matrix A A^T / tr, rejection free."""
    a = rng.standard_normal((size, rank))
    m = a @ a.T
    return m / np.trace(m)


def admissible_region(samples: int, spec: KSpec | None = None,
                      seed: int = 0, rank: int = 4,
                      dilations: int = 17) -> tuple[list[UncertaintyPair],
                                                    list[UncertaintyPair]]:
    """Points of the admissible (deltaQ, deltaP) region for d=1.

    Returns (boundary, cloud): the dilation family tracing the hyperbola
    deltaQ*deltaP = C*hbar through the optimal pair, and random density
    operators sampled above it.
    """
    if spec is None:
        spec = KSpec()
    if spec.basis.dimension != 1:
        raise ValueError("admissible region is computed for dimension 1")
    result = optimal_constant(spec)
    best = uncertainty_product_check(
        np.outer(result.coefficients, result.coefficients), spec)
    lam = np.geomspace(0.5, 2.0, dilations)
    boundary = [UncertaintyPair(l * best.deltaQ, best.deltaP / l)
                for l in lam]
    rng = np.random.default_rng(seed)
    cloud = [uncertainty_product_check(
        random_density_matrix(spec.basis.size, rank, rng), spec)
        for _ in range(samples)]
    return boundary, cloud
