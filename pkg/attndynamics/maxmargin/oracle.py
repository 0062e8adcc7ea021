import itertools

import numpy as np
from scipy.linalg import lstsq

from attndynamics.exceptions import NotSeparableError, ValidationError
from attndynamics.maxmargin.solver import MarginSolution, kkt_residuals

MAX_ORACLE_POINTS = 12


def support_subset_oracle(pooled, tol=1e-9):
    """Brute-force max-margin solution over every candidate support set.

    For each subset S of at most ``min(n, d + 1)`` points the least-norm
    ``u`` with ``y_n <u, v_n> = 1`` on S is computed; the feasible candidate
    of smallest norm is the max-margin separator.

    Args:
        pooled (PooledDataset): At most 12 points.
        tol (float): Slack allowed in consistency and feasibility checks.

    Returns:
        MarginSolution
    """
    n = len(pooled)
    if n > MAX_ORACLE_POINTS:
        raise ValidationError("The subset oracle handles at most %d points, got %d"
                              % (MAX_ORACLE_POINTS, n))
    points = pooled.points
    labels = pooled.labels
    signed = labels[:, np.newaxis] * points

    best = None
    for size in range(1, min(n, pooled.d + 1) + 1):
        for subset in itertools.combinations(range(n), size):
            A = signed[list(subset)]
            ones = np.ones(size)
            u, _, _, _ = lstsq(A, ones)
            if np.linalg.norm(A.dot(u) - ones) > tol:
                continue
            if (signed.dot(u)).min() < 1.0 - tol:
                continue
            norm = np.linalg.norm(u)
            if best is None or norm < best[0] - tol:
                best = (norm, u, subset)
    if best is None:
        raise NotSeparableError("No support subset yields a feasible separator")

    _, u, subset = best
    coefficients, _, _, _ = lstsq(signed[list(subset)].T, u)
    alpha = np.zeros(n)
    alpha[list(subset)] = coefficients
    residuals = kkt_residuals(points, labels, u, alpha)
    return MarginSolution(u, alpha, subset, residuals['feasibility'],
                          residuals['stationarity'], residuals['complementarity'],
                          residuals['duality_gap'], residuals['min_margin'])
