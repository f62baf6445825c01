"""Covariant phase-space observable calculus for one degree of freedom.

A covariant joint position-momentum observable is generated by a density
operator m.  Its position marginal on an input state rho is the ideal
distribution convolved with the noise density of the parity-conjugated m,
and likewise in momentum; the full outcome distribution is the (possibly
non-coherent) Husimi function tr(rho W(p,q)* m W(p,q)) / (2 pi hbar).
All states live in a truncated full Hermite basis with real coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .oscillator import (BasisSpec, abs_q_matrix, fourier_phase_matrix,
                         hermite_values)
from .spectral import KSpec, UncertaintyPair, optimal_constant
from .transport import GridDensity, convolve

# Default grids: the x-range captures states built from moderate Hermite
# indices to better than 1e-10 of mass; q-shifts must be grid multiples.
X_ORIGIN, X_STEP, X_COUNT = -12.0, 1.0 / 64, 1537
PQ_ORIGIN, PQ_STEP, PQ_COUNT = -8.0, 1.0 / 16, 257
MAX_HUSIMI_RANK = 8


class CovariantError(RuntimeError):
    """Raised for invalid density operators or insufficient grids."""


@dataclass(frozen=True)
class DensityOperator:
    """Real-represented density operator in a truncated Hermite basis."""

    basis: BasisSpec
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        n = self.basis.size
        if m.shape != (n, n):
            raise CovariantError(f"matrix shape {m.shape}, expected {(n, n)}")
        if np.abs(m - m.T).max() > 1e-12 * max(np.abs(m).max(), 1.0):
            raise CovariantError("density matrix must be symmetric")
        if abs(np.trace(m) - 1.0) > 1e-10:
            raise CovariantError(f"trace is {np.trace(m)!r}, expected 1")
        low = np.linalg.eigvalsh(m)[0]
        if low < -1e-10:
            raise CovariantError(f"negative eigenvalue {low}")


@dataclass(frozen=True)
class NoiseDensity:
    """Marginal noise distributions (m^Q, m^P) of a covariant observable."""

    mQ: GridDensity
    mP: GridDensity


@dataclass(frozen=True)
class PhaseSpaceDensity:
    """Joint outcome density on a uniform (p, q) grid, tabulated as
    tr(rho W* m W); probability element is value * dp * dq / (2 pi hbar)."""

    p_origin: float
    p_step: float
    q_origin: float
    q_step: float
    values: np.ndarray
    hbar: float

    @property
    def p_grid(self) -> np.ndarray:
        return self.p_origin + self.p_step * np.arange(self.values.shape[0])

    @property
    def q_grid(self) -> np.ndarray:
        return self.q_origin + self.q_step * np.arange(self.values.shape[1])

    @property
    def total_mass(self) -> float:
        return float(self.values.sum() * self.p_step * self.q_step
                     / (2.0 * math.pi * self.hbar))

    def q_marginal(self) -> GridDensity:
        vals = self.values.sum(axis=0) * self.p_step / (2.0 * math.pi
                                                        * self.hbar)
        return GridDensity.from_samples(self.q_origin, self.q_step, vals)

    def p_marginal(self) -> GridDensity:
        vals = self.values.sum(axis=1) * self.q_step / (2.0 * math.pi
                                                        * self.hbar)
        return GridDensity.from_samples(self.p_origin, self.p_step, vals)


def _full_basis(basis: BasisSpec) -> BasisSpec:
    if basis.sector != "full":
        raise CovariantError("covariant calculus uses the full d=1 sector")
    return basis


def state_operator(coefficients: np.ndarray,
                   basis: BasisSpec) -> DensityOperator:
    """Pure-state projector from basis coefficients (normalized here)."""
    c = np.asarray(coefficients, dtype=float)
    if c.shape != (basis.size,):
        raise CovariantError(
            f"coefficient shape {c.shape}, expected {(basis.size,)}")
    norm = np.linalg.norm(c)
    if norm == 0.0:
        raise CovariantError("zero coefficient vector")
    c = c / norm
    return DensityOperator(_full_basis(basis), np.outer(c, c))


def excited_operator(n: int, basis: BasisSpec) -> DensityOperator:
    """Projector onto the n-th Hermite state."""
    if not 0 <= n < basis.size:
        raise CovariantError(f"state index {n} outside basis of {basis.size}")
    c = np.zeros(basis.size)
    c[n] = 1.0
    return state_operator(c, basis)


def ground_operator(basis: BasisSpec) -> DensityOperator:
    """Projector onto the oscillator ground state."""
    return excited_operator(0, basis)


def squeezed_operator(lam: float, basis: BasisSpec) -> DensityOperator:
    """Projector onto the dilated ground state psi(x) = h0(x/lam)/sqrt(lam).

    Expanded over even Hermite states; the expansion must be captured by
    the truncation to 1e-10 of norm.
    """
    if lam <= 0:
        raise CovariantError(f"squeeze parameter must be positive, got {lam}")
    s = math.log(lam)
    c = np.zeros(basis.size)
    t = math.tanh(s)
    c[0] = math.sqrt(1.0 / math.cosh(s))
    for k in range(1, (basis.size + 1) // 2):
        if t == 0.0:
            break
        logmag = (0.5 * math.log(1.0 / math.cosh(s)) + k * math.log(abs(t))
                  + 0.5 * gammaln(2 * k + 1) - k * math.log(2.0)
                  - gammaln(k + 1))
        sign = -1.0 if (t < 0.0 and k % 2 == 1) else 1.0
        c[2 * k] = sign * math.exp(logmag)
    norm = np.linalg.norm(c)
    if abs(norm - 1.0) > 1e-10:
        raise CovariantError(
            f"squeeze lam={lam} not captured by truncation (norm {norm!r})")
    return state_operator(c, basis)


def optimal_operator(basis: BasisSpec) -> DensityOperator:
    """Projector onto the ground state of K = |Q| + |P|, embedded from the
    even sector into the full basis."""
    basis = _full_basis(basis)
    even_size = (basis.size + 1) // 2
    result = optimal_constant(
        KSpec(1.0, 1.0, BasisSpec(1, even_size, basis.hbar, "even")))
    c = np.zeros(basis.size)
    c[0:2 * even_size:2] = result.coefficients
    return state_operator(c, basis)


def _hermite_table(basis: BasisSpec, x: np.ndarray) -> np.ndarray:
    # Basis functions carry the hbar length scale sqrt(hbar).
    root = math.sqrt(basis.hbar)
    return hermite_values(basis.size, x / root) / math.sqrt(root)


def _quadratic_density(matrix: np.ndarray, table: np.ndarray) -> np.ndarray:
    return np.einsum("jx,jk,kx->x", table, matrix, table, optimize=True)


def _parity_conjugate(matrix: np.ndarray) -> np.ndarray:
    signs = (-1.0) ** np.arange(matrix.shape[0])
    return matrix * np.outer(signs, signs)


def _momentum_phase(size: int) -> np.ndarray:
    # Re(i^(j-k)); the imaginary part cancels for symmetric real matrices.
    idx = np.arange(size)
    return np.cos(0.5 * math.pi * (idx[:, None] - idx[None, :]))


def position_density(op: DensityOperator, x: np.ndarray) -> np.ndarray:
    """<x| op |x> sampled at the given positions."""
    return _quadratic_density(op.matrix, _hermite_table(op.basis, x))


def momentum_density(op: DensityOperator, p: np.ndarray) -> np.ndarray:
    """<p| op |p>; Hermite states pick up Fourier phases (-i)^n."""
    m = op.matrix * _momentum_phase(op.basis.size)
    return _quadratic_density(m, _hermite_table(op.basis, p))


def state_density_grid(op: DensityOperator, origin: float = X_ORIGIN,
                       step: float = X_STEP,
                       count: int = X_COUNT) -> tuple[GridDensity,
                                                      GridDensity]:
    """Ideal position and momentum distributions of a state as grid
    densities."""
    x = origin + step * np.arange(count)
    q = _capture(position_density(op, x), step)
    p = _capture(momentum_density(op, x), step)
    return (GridDensity.from_samples(origin, step, q),
            GridDensity.from_samples(origin, step, p))


def _capture(vals: np.ndarray, step: float) -> np.ndarray:
    vals = np.clip(vals, 0.0, None)
    mass = step * vals.sum()
    if abs(mass - 1.0) > 1e-6:
        raise CovariantError(
            f"grid captures mass {mass!r}; widen or refine the grid")
    return vals


def noise_marginals(m: DensityOperator, origin: float = X_ORIGIN,
                    step: float = X_STEP,
                    count: int = X_COUNT) -> NoiseDensity:
    """Noise densities of the parity-conjugated generating operator:
    mQ(x) = <x| P m P |x> and its momentum analogue."""
    conj = DensityOperator(m.basis, _parity_conjugate(m.matrix))
    mq, mp = state_density_grid(conj, origin, step, count)
    return NoiseDensity(mQ=mq, mP=mp)


def marginal_by_convolution(ideal: GridDensity,
                            noise: GridDensity) -> GridDensity:
    """Observed marginal: ideal distribution blurred by the noise."""
    return convolve(ideal, noise)


def observable_distance_covariant(m: DensityOperator) -> UncertaintyPair:
    """Observable distances (d(M1,Q), d(M2,P)) = (tr(m|Q|), tr(m|P|))."""
    q = abs_q_matrix(m.basis).entries
    p = q * fourier_phase_matrix(m.basis)
    return UncertaintyPair(deltaQ=float(np.sum(m.matrix * q)),
                           deltaP=float(np.sum(m.matrix * p)))


def _eigen_branches(op: DensityOperator, tol: float,
                    cap: int) -> tuple[np.ndarray, np.ndarray]:
    vals, vecs = np.linalg.eigh(op.matrix)
    keep = vals > tol
    if keep.sum() > cap:
        raise CovariantError(
            f"rank {int(keep.sum())} exceeds the Husimi cap {cap}")
    return vals[keep], vecs[:, keep]


def husimi(rho: DensityOperator, m: DensityOperator,
           p_origin: float = PQ_ORIGIN, p_step: float = PQ_STEP,
           p_count: int = PQ_COUNT, q_origin: float = PQ_ORIGIN,
           q_step: float = PQ_STEP,
           q_count: int = PQ_COUNT) -> PhaseSpaceDensity:
    """Joint outcome density tr(rho W(p,q)* m W(p,q)).

    The Weyl operator acts by shift and phase on position samples, so each
    overlap <phi| W(p,q) |psi> is a windowed Fourier integral over the x
    grid; q values must be multiples of the x step.
    """
    if rho.basis != m.basis:
        raise CovariantError("state and noise operator bases differ")
    hbar = rho.basis.hbar
    x = X_ORIGIN + X_STEP * np.arange(X_COUNT)
    table = _hermite_table(rho.basis, x)
    rvals, rvecs = _eigen_branches(rho, 1e-12, MAX_HUSIMI_RANK)
    mvals, mvecs = _eigen_branches(m, 1e-12, MAX_HUSIMI_RANK)
    rho_x = rvecs.T @ table
    m_x = mvecs.T @ table

    q = q_origin + q_step * np.arange(q_count)
    shifts = q / X_STEP
    if np.abs(shifts - np.round(shifts)).max() > 1e-9:
        raise CovariantError("q grid must align with the x grid step")
    shifts = np.round(shifts).astype(int)
    p = p_origin + p_step * np.arange(p_count)
    kernel = np.exp(-1j * np.outer(x, p) / hbar)

    values = np.zeros((p_count, q_count))
    for a, ra in enumerate(rvals):
        psi = rho_x[a]
        # Rows are psi(x + q) for each q; zero fill outside the window.
        shifted = np.zeros((q_count, X_COUNT))
        for qi, s in enumerate(shifts):
            lo, hi = max(0, -s), min(X_COUNT, X_COUNT - s)
            shifted[qi, lo:hi] = psi[lo + s:hi + s]
        for b, mb in enumerate(mvals):
            amps = (shifted * m_x[b]) @ kernel * X_STEP
            values += (ra * mb) * np.abs(amps).T ** 2
    density = PhaseSpaceDensity(p_origin=p_origin, p_step=p_step,
                                q_origin=q_origin, q_step=q_step,
                                values=values, hbar=hbar)
    if abs(density.total_mass - 1.0) > 1e-4:
        raise CovariantError(
            f"phase-space grid captures mass {density.total_mass!r}")
    return density
