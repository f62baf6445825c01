"""Shared fixtures, independent test oracles and acceptance reporting."""

from itertools import combinations

import numpy as np
import pytest

from murbound import DiscreteMeasure, KSpec, optimal_constant

ACCEPTANCE_LINES = []


def acceptance_report(number: int, ok: bool, detail: str) -> None:
    """Queue a one-line verdict, echoed after the pytest summary."""
    status = "PASS" if ok else "FAIL"
    ACCEPTANCE_LINES.append(f"criterion {number}: {status} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


def transport_oracle(mu1: DiscreteMeasure, mu2: DiscreteMeasure,
                     ordp=2) -> float:
    """Minimal transport cost by brute-force vertex enumeration.

    Every vertex of the transport polytope is supported on a spanning tree
    of the bipartite support graph; for supports up to 4 points per side
    all candidate trees can be enumerated and solved directly.
    """
    n1, n2 = len(mu1.weights), len(mu2.weights)
    assert max(n1, n2) <= 4, "oracle is exponential; supports must be <= 4"
    cost = np.linalg.norm(
        mu1.points[:, None, :] - mu2.points[None, :, :], ord=ordp, axis=2)
    edges = [(i, j) for i in range(n1) for j in range(n2)]
    k = n1 + n2 - 1
    best = np.inf
    # Marginal equations with one redundant row dropped.
    rhs = np.concatenate([mu1.weights, mu2.weights[:-1]])
    for subset in combinations(edges, k):
        a = np.zeros((k, k))
        for col, (i, j) in enumerate(subset):
            a[i, col] = 1.0
            if j < n2 - 1:
                a[n1 + j, col] = 1.0
        try:
            masses = np.linalg.solve(a, rhs)
        except np.linalg.LinAlgError:
            continue
        if np.all(masses >= -1e-12):
            value = sum(m * cost[i, j]
                        for m, (i, j) in zip(masses, subset))
            best = min(best, value)
    assert np.isfinite(best)
    return float(best)


def random_discrete_1d(rng: np.random.Generator,
                       max_atoms: int = 20) -> DiscreteMeasure:
    n = int(rng.integers(1, max_atoms + 1))
    points = rng.uniform(-5.0, 5.0, size=(n, 1))
    weights = rng.uniform(0.1, 1.0, size=n)
    return DiscreteMeasure(points, weights / weights.sum())


@pytest.fixture(scope="session")
def ground_d1():
    """Reference d=1 ground-state result at the default truncation."""
    return optimal_constant(KSpec())
