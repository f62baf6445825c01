"""Truncated harmonic-oscillator bases and matrix elements of |Q| and |P|.

For one degree of freedom the basis is Hermite functions (even-parity
sector by default); for ``dimension >= 2`` it is the zero-angular-momentum
radial Laguerre functions.  Matrix elements of the multiplication operator
|x| (resp. r) are evaluated by generalized Gauss-Laguerre quadrature in
``u = x**2``, where every integrand is a polynomial times the quadrature
weight, so the entries are exact to rounding.  |P| is never discretized:
it follows from |Q| through the Fourier eigenstructure of the oscillator
states, which reduces to a sign conjugation within a fixed sector.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .quadrature import gauss_laguerre_expfree

# The damped three-term recurrences start from exp(-u/2); beyond this basis
# size the start value underflows at the outermost quadrature nodes.
MAX_SIZE = 300

_SECTORS = ("even", "full", "radial")


@dataclass(frozen=True)
class BasisSpec:
    """Truncated oscillator basis: dimension, size and symmetry sector.

    ``sector`` is ``"even"`` (Hermite indices 0, 2, ..., 2*(size-1)) or
    ``"full"`` (indices 0..size-1) for dimension 1, and ``"radial"``
    (l=0 radial indices 0..size-1) for dimension >= 2.
    """

    dimension: int = 1
    size: int = 128
    hbar: float = 1.0
    sector: str = "auto"

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if not 2 <= self.size <= MAX_SIZE:
            raise ValueError(
                f"size must be in [2, {MAX_SIZE}], got {self.size}")
        if self.hbar <= 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        sector = self.sector
        if sector == "auto":
            sector = "even" if self.dimension == 1 else "radial"
            object.__setattr__(self, "sector", sector)
        if sector not in _SECTORS:
            raise ValueError(f"unknown sector {sector!r}")
        if self.dimension == 1 and sector == "radial":
            raise ValueError("radial sector requires dimension >= 2")
        if self.dimension > 1 and sector != "radial":
            raise ValueError("dimension >= 2 supports only the radial sector")

    def with_size(self, size: int) -> "BasisSpec":
        return BasisSpec(self.dimension, size, self.hbar, self.sector)


@dataclass(frozen=True)
class BasisMatrix:
    """Dense real symmetric operator matrix in a truncated basis."""

    spec: BasisSpec
    entries: np.ndarray
    label: str

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", entries)
        n = self.spec.size
        if entries.shape != (n, n):
            raise ValueError(f"expected {(n, n)} matrix, got {entries.shape}")
        scale = max(np.abs(entries).max(), 1.0)
        if np.abs(entries - entries.T).max() > 1e-12 * scale:
            raise ValueError(f"matrix {self.label!r} is not symmetric")


def hermite_values(count: int, x: np.ndarray) -> np.ndarray:
    """Table of normalized oscillator eigenfunctions h_0..h_{count-1} at x.

    The Gaussian factor is folded into the start of the normalized
    recurrence, so values stay bounded for any index.
    """
    x = np.asarray(x, dtype=float)
    vals = np.empty((count, x.size))
    flat = x.ravel()
    vals[0] = math.pi ** -0.25 * np.exp(-0.5 * flat * flat)
    if count > 1:
        vals[1] = math.sqrt(2.0) * flat * vals[0]
    for n in range(1, count - 1):
        vals[n + 1] = (math.sqrt(2.0 / (n + 1)) * flat * vals[n]
                       - math.sqrt(n / (n + 1.0)) * vals[n - 1])
    return vals


def hermite_function(n: int, x) -> np.ndarray | float:
    """Normalized oscillator eigenfunction h_n(x) for hbar = 1, unit frequency."""
    if n < 0:
        raise ValueError(f"index must be nonnegative, got {n}")
    scalar = isinstance(x, numbers.Real)
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    out = hermite_values(n + 1, arr)[n]
    return float(out[0]) if scalar else out.reshape(np.shape(x))


def radial_values(count: int, r: np.ndarray, dimension: int) -> np.ndarray:
    """Orthonormal l=0 radial oscillator functions R_0..R_{count-1} at r.

    Orthonormal with respect to the measure r**(dimension-1) dr.  Uses the
    normalized Laguerre recurrence in u = r**2 with log-Gamma prefactors,
    stable for large alpha = dimension/2 - 1.
    """
    alpha = dimension / 2.0 - 1.0
    u = np.asarray(r, dtype=float) ** 2
    vals = laguerre_damped_values(count, u, alpha)
    return math.sqrt(2.0) * vals


def laguerre_damped_values(count: int, u: np.ndarray, alpha: float) -> np.ndarray:
    """Normalized Laguerre polynomials times exp(-u/2), orthonormal for
    the weight u**alpha du (up to the Gaussian already included)."""
    vals = np.empty((count, u.size))
    vals[0] = np.exp(-0.5 * gammaln(alpha + 1.0) - 0.5 * u)
    if count > 1:
        vals[1] = (alpha + 1.0 - u) * vals[0] / math.sqrt(alpha + 1.0)
    for n in range(1, count - 1):
        vals[n + 1] = (((2 * n + alpha + 1.0 - u) * vals[n]
                        - math.sqrt(n * (n + alpha)) * vals[n - 1])
                       / math.sqrt((n + 1) * (n + alpha + 1.0)))
    return vals


def _parity_mask(size: int) -> np.ndarray:
    idx = np.arange(size)
    return (idx[:, None] - idx[None, :]) % 2 == 0


def abs_q_matrix(spec: BasisSpec) -> BasisMatrix:
    """Matrix of the operator |Q| (multiplication by |x|, resp. r) in the
    declared sector.  Scales as sqrt(hbar)."""
    n = spec.size
    order = n + 8
    if spec.sector in ("even", "full"):
        # 2 * int_0^inf x h_m(x) h_n(x) dx = int_0^inf (h_m h_n)(sqrt(u)) du
        # for m, n of equal parity; the u-integrand is a polynomial times
        # e^-u, handled exactly by the alpha=0 Gauss-Laguerre rule.
        u, t = gauss_laguerre_expfree(0.0, order)
        root = np.sqrt(u)
        if spec.sector == "even":
            top = 2 * (n - 1)
            vals = hermite_values(top + 1, root)[::2]
            entries = (vals * t) @ vals.T
        else:
            vals = hermite_values(n, root)
            entries = (vals * t) @ vals.T
            entries[~_parity_mask(n)] = 0.0
    else:
        # int_0^inf R_m R_n r * r^(d-1) dr reduces to the Gauss-Laguerre
        # rule with alpha = (d-1)/2 applied to the damped Laguerre values.
        alpha = spec.dimension / 2.0 - 1.0
        u, t = gauss_laguerre_expfree(alpha + 0.5, order)
        vals = laguerre_damped_values(n, u, alpha)
        entries = (vals * t) @ vals.T
    entries *= math.sqrt(spec.hbar)
    entries = 0.5 * (entries + entries.T)
    return BasisMatrix(spec=spec, entries=entries, label="|Q|")


def fourier_signs(spec: BasisSpec) -> np.ndarray:
    """Fourier-transform eigenvalue pattern of the sector's basis states,
    reduced to real signs.

    In the even sector state h_{2k} has Fourier eigenvalue (-1)^k; radial
    l=0 state n has (-1)^n.  For the full d=1 basis the eigenvalues are
    (-i)^n and only the same-parity phase products survive in |P|.
    """
    idx = np.arange(spec.size)
    if spec.sector in ("even", "radial"):
        return (-1.0) ** idx
    raise ValueError("full sector has complex phases; use fourier_phase_matrix")


def fourier_phase_matrix(spec: BasisSpec) -> np.ndarray:
    """Real matrix of phase products conj(phi_m) * phi_n entering |P|."""
    idx = np.arange(spec.size)
    if spec.sector in ("even", "radial"):
        s = fourier_signs(spec)
        return np.outer(s, s)
    diff = idx[None, :] - idx[:, None]
    # i^(n-m): +-1 for even difference, purely imaginary (discarded by
    # symmetry) for odd difference where |Q| vanishes anyway.
    phase = np.real(1j ** (diff % 4))
    phase[~_parity_mask(spec.size)] = 0.0
    return phase


def abs_p_matrix(spec: BasisSpec) -> BasisMatrix:
    """Matrix of |P|, obtained from |Q| by Fourier conjugation of the
    oscillator states; unitarily equivalent to |Q|, hence same spectrum."""
    q = abs_q_matrix(spec)
    entries = q.entries * fourier_phase_matrix(spec)
    return BasisMatrix(spec=spec, entries=entries, label="|P|")


def gram_matrix(spec: BasisSpec) -> np.ndarray:
    """Overlap matrix of the sector basis under the matched quadrature;
    identity up to rounding (orthonormality diagnostic)."""
    n = spec.size
    order = n + 8
    if spec.sector in ("even", "full"):
        u, t = gauss_laguerre_expfree(-0.5, order)
        root = np.sqrt(u)
        if spec.sector == "even":
            vals = hermite_values(2 * (n - 1) + 1, root)[::2]
            return (vals * t) @ vals.T
        vals = hermite_values(n, root)
        g = (vals * t) @ vals.T
        g[~_parity_mask(n)] = 0.0
        return g
    alpha = spec.dimension / 2.0 - 1.0
    u, t = gauss_laguerre_expfree(alpha, order)
    vals = laguerre_damped_values(n, u, alpha)
    return (vals * t) @ vals.T
