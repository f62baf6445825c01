"""Probability measures on R^d and the Wasserstein-1 distance.

Discrete measures are weighted point sets, densities are tabulated on
uniform grids.  The distance is always evaluated through its dual or
coupling characterizations: the CDF formula in one dimension and an exact
linear program in general.  The Lipschitz-ball supremum is never searched
directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.integrate import simpson
from scipy.optimize import linprog

MAX_LP_SUPPORT = 512

_NORM_ORDERS = {"euclidean": 2, "l1": 1, "linf": np.inf}


class MeasureError(ValueError):
    """Raised for invalid measures or incompatible measure pairs."""


def _norm_order(metric: str):
    try:
        return _NORM_ORDERS[metric]
    except KeyError:
        raise MeasureError(f"unknown metric {metric!r}; "
                           f"choose from {sorted(_NORM_ORDERS)}") from None


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely supported probability measure: points (n, d) and weights (n,).

    Points coinciding within 1e-12 are merged with summed weights and the
    support is sorted lexicographically, so equal measures get equal
    representations.
    """

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.ndim != 2:
            raise MeasureError(f"points must be a 2d array, got {pts.ndim}d")
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or len(w) != len(pts):
            raise MeasureError("weights must match points in length")
        if len(w) < 1:
            raise MeasureError("measure needs at least one point")
        if np.any(w < 0):
            raise MeasureError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise MeasureError(f"weights sum to {w.sum()!r}, expected 1")
        # Merge coincident points: quantize at the 1e-12 scale and group.
        key = np.round(pts * 1e12).astype(np.int64)
        _, order, inverse = np.unique(key, axis=0, return_index=True,
                                      return_inverse=True)
        merged_w = np.zeros(len(order))
        np.add.at(merged_w, inverse, w)
        object.__setattr__(self, "points", pts[order])
        object.__setattr__(self, "weights", merged_w)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    @staticmethod
    def point(x) -> "DiscreteMeasure":
        """The point measure at x."""
        return DiscreteMeasure(np.atleast_2d(np.asarray(x, dtype=float)),
                               np.ones(1))


@dataclass(frozen=True)
class GridDensity:
    """One-dimensional probability density tabulated on a uniform grid."""

    origin: float
    step: float
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if self.step <= 0:
            raise MeasureError(f"step must be positive, got {self.step}")
        if np.any(vals < 0):
            raise MeasureError("density values must be nonnegative")
        total = self.step * vals.sum()
        if abs(total - 1.0) > 1e-9:
            raise MeasureError(f"density integrates to {total!r}, expected 1")

    @property
    def grid(self) -> np.ndarray:
        return self.origin + self.step * np.arange(len(self.values))

    @staticmethod
    def from_samples(origin: float, step: float,
                     values: np.ndarray) -> "GridDensity":
        """Normalize raw nonnegative samples into a density."""
        vals = np.asarray(values, dtype=float)
        total = step * vals.sum()
        if total <= 0:
            raise MeasureError("cannot normalize an all-zero density")
        return GridDensity(origin, step, vals / total)


@dataclass(frozen=True)
class CDF:
    """Piecewise description of a distribution function on R."""

    breakpoints: np.ndarray
    cumulative: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.breakpoints, dtype=float)
        c = np.asarray(self.cumulative, dtype=float)
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "cumulative", c)
        if np.any(np.diff(b) <= 0):
            raise MeasureError("breakpoints must be strictly increasing")
        if np.any(np.diff(c) < -1e-14):
            raise MeasureError("cumulative values must be nondecreasing")
        if abs(c[-1] - 1.0) > 1e-12:
            raise MeasureError(f"CDF must end at 1, got {c[-1]!r}")


@dataclass(frozen=True)
class TransportPlan:
    """Coupling of two discrete measures: mass moved from each source point
    to each target point."""

    source: DiscreteMeasure
    target: DiscreteMeasure
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        shape = (len(self.source.weights), len(self.target.weights))
        if m.shape != shape:
            raise MeasureError(f"plan shape {m.shape}, expected {shape}")
        if np.any(m < -1e-12):
            raise MeasureError("plan masses must be nonnegative")
        if np.abs(m.sum(axis=1) - self.source.weights).max() > 1e-10:
            raise MeasureError("plan row sums do not match source weights")
        if np.abs(m.sum(axis=0) - self.target.weights).max() > 1e-10:
            raise MeasureError("plan column sums do not match target weights")


def discrete_cdf(mu: DiscreteMeasure) -> CDF:
    """Distribution function of a one-dimensional discrete measure."""
    if mu.dimension != 1:
        raise MeasureError("CDF requires a one-dimensional measure")
    x = mu.points[:, 0]
    return CDF(breakpoints=x, cumulative=np.cumsum(mu.weights))


def _require_pair(mu1, mu2):
    if type(mu1) is not type(mu2):
        raise MeasureError("both measures must have the same representation")


def _common_grids(f: GridDensity, g: GridDensity):
    """Resample the coarser density onto the finer step over the union
    support; returns (x, f_values, g_values)."""
    step = min(f.step, g.step)
    lo = min(f.origin, g.origin)
    hi = max(f.grid[-1], g.grid[-1])
    x = lo + step * np.arange(int(round((hi - lo) / step)) + 1)
    fv = np.interp(x, f.grid, f.values, left=0.0, right=0.0)
    gv = np.interp(x, g.grid, g.values, left=0.0, right=0.0)
    return x, fv, gv


def wasserstein1_1d(mu1, mu2) -> float:
    """Wasserstein-1 distance on R via the integral of |F1 - F2|.

    Exact (piecewise-constant CDFs) for discrete measures, trapezoid for
    grid densities.
    """
    _require_pair(mu1, mu2)
    if isinstance(mu1, DiscreteMeasure):
        if mu1.dimension != 1 or mu2.dimension != 1:
            raise MeasureError("CDF formula requires one-dimensional measures")
        x = np.concatenate([mu1.points[:, 0], mu2.points[:, 0]])
        order = np.argsort(x, kind="stable")
        # Signed jumps of F1 - F2 at the merged breakpoints.
        jump = np.concatenate([mu1.weights, -mu2.weights])[order]
        x = x[order]
        diff = np.cumsum(jump)[:-1]
        return float(np.dot(np.abs(diff), np.diff(x)))
    x, fv, gv = _common_grids(mu1, mu2)
    step = x[1] - x[0] if len(x) > 1 else 0.0
    cum1 = np.cumsum(fv) * step
    cum2 = np.cumsum(gv) * step
    d = np.abs(cum1 / cum1[-1] - cum2 / cum2[-1])
    return float(np.trapezoid(d, dx=step))


def monge_cost(plan: TransportPlan, metric: str = "euclidean") -> float:
    """Total transport price of a coupling: sum of mass times distance."""
    ordp = _norm_order(metric)
    diff = plan.source.points[:, None, :] - plan.target.points[None, :, :]
    cost = np.linalg.norm(diff, ord=ordp, axis=2)
    return float(np.sum(plan.matrix * cost))


def kantorovich_lp(mu1: DiscreteMeasure, mu2: DiscreteMeasure,
                   metric: str = "euclidean") -> tuple[float, TransportPlan]:
    """Minimal transport cost and an optimal plan, by exact LP.

    For one-dimensional inputs the value coincides with wasserstein1_1d
    (Kantorovich equivalence of the coupling and dual problems).
    """
    if mu1.dimension != mu2.dimension:
        raise MeasureError("measures live in different dimensions")
    n1, n2 = len(mu1.weights), len(mu2.weights)
    if max(n1, n2) > MAX_LP_SUPPORT:
        raise MeasureError(
            f"support size exceeds LP bound {MAX_LP_SUPPORT}")
    ordp = _norm_order(metric)
    diff = mu1.points[:, None, :] - mu2.points[None, :, :]
    cost = np.linalg.norm(diff, ord=ordp, axis=2)

    # Marginal constraints; one row is redundant and dropped for rank.
    rows, cols, data = [], [], []
    for i in range(n1):
        rows.extend([i] * n2)
        cols.extend(range(i * n2, (i + 1) * n2))
        data.extend([1.0] * n2)
    for j in range(n2 - 1):
        rows.extend([n1 + j] * n1)
        cols.extend(range(j, n1 * n2, n2))
        data.extend([1.0] * n1)
    a_eq = sparse.coo_matrix((data, (rows, cols)),
                             shape=(n1 + n2 - 1, n1 * n2))
    b_eq = np.concatenate([mu1.weights, mu2.weights[:-1]])
    res = linprog(cost.ravel(), A_eq=a_eq.tocsr(), b_eq=b_eq,
                  bounds=(0, None), method="highs")
    if not res.success:
        raise RuntimeError(f"transport LP failed: {res.message}")
    plan_matrix = np.clip(res.x.reshape(n1, n2), 0.0, None)
    plan = TransportPlan(source=mu1, target=mu2, matrix=plan_matrix)
    return float(np.sum(plan_matrix * cost)), plan


def convolve(mu, nu):
    """Distribution of the sum of independent draws from mu and nu."""
    _require_pair(mu, nu)
    if isinstance(mu, DiscreteMeasure):
        if mu.dimension != nu.dimension:
            raise MeasureError("measures live in different dimensions")
        pts = (mu.points[:, None, :] + nu.points[None, :, :]).reshape(
            -1, mu.dimension)
        w = np.outer(mu.weights, nu.weights).ravel()
        return DiscreteMeasure(pts, w / w.sum())
    x, fv, gv = _common_grids(mu, nu)
    step = x[1] - x[0]
    out = np.convolve(fv, gv) * step
    return GridDensity.from_samples(2.0 * x[0], step, out)


def first_absolute_moment(nu, metric: str = "euclidean") -> float:
    """Mean distance of nu from the origin; the noise bound of the
    convolution inequality d(mu, mu * nu) <= this."""
    if isinstance(nu, DiscreteMeasure):
        ordp = _norm_order(metric)
        return float(np.dot(np.linalg.norm(nu.points, ord=ordp, axis=1),
                            nu.weights))
    x = nu.grid
    if len(x) < 3:
        return float(nu.step * np.dot(np.abs(x), nu.values))
    # Simpson beats the plain Riemann sum near the kink of |x|; on the
    # default grids the kink sits on an even node, keeping O(h^4) accuracy.
    return float(simpson(np.abs(x) * nu.values, x=x))
