import logging

import numpy as np
from numba import njit
from scipy.linalg import lstsq
from scipy.optimize import nnls

from attndynamics.config_init import config
from attndynamics.exceptions import (
    ConvergenceError,
    NotSeparableError,
    ValidationError
)

logger = logging.getLogger('attndynamics.maxmargin')

# coordinate updates between two KKT checks
UPDATES_PER_CHECK = 10000

# relative dual size below which a point is left out of the active set
ACTIVE_FRACTION = 1e-6
# margins within this distance of 1 seed an active set
ACTIVE_MARGIN = 1e-3
# rounds of adding violated and dropping idle points
REFINE_ROUNDS = 20


def within_tolerance(residuals, u_norm, alpha_sum, tol):
    """Whether KKT residuals certify optimality at tolerance ``tol``.

    Feasibility is absolute. Stationarity is measured against ``max(1, |u|)``,
    complementarity against ``max(1, sum alpha)`` and the duality gap against
    ``max(1, |u|^2 / 2)``, the sizes of the quantities they compare.
    """
    return (residuals['feasibility'] <= tol and
            residuals['stationarity'] <= tol * max(1.0, u_norm) and
            residuals['complementarity'] <= tol * max(1.0, alpha_sum) and
            abs(residuals['duality_gap']) <= tol * max(1.0, 0.5 * u_norm ** 2))


class MarginSolution(object):
    """A hard-margin separator with its dual certificate.

    Attributes:
        u_star (np.ndarray): Minimum-norm vector with ``y_n <u, v_n> >= 1``.
        alpha (np.ndarray): Dual variables, one per point.
        support (list[int]): Indices with a positive dual variable.
        feasibility (float): ``max(0, 1 - min_n y_n <u_star, v_n>)``.
        stationarity (float): ``|u_star - sum_n alpha_n y_n v_n|``.
        complementarity (float): ``max_n alpha_n |y_n <u_star, v_n> - 1|``.
        duality_gap (float): Primal minus dual objective.
        min_margin (float): ``min_n y_n <u_star, v_n>``.
        updates (int): Coordinate updates performed (0 for the oracle).
    """

    def __init__(self, u_star, alpha, support, feasibility, stationarity,
                 complementarity, duality_gap, min_margin, updates=0):
        self.u_star = np.asarray(u_star, dtype=np.float64)
        self.alpha = np.asarray(alpha, dtype=np.float64)
        self.support = [int(i) for i in support]
        self.feasibility = float(feasibility)
        self.stationarity = float(stationarity)
        self.complementarity = float(complementarity)
        self.duality_gap = float(duality_gap)
        self.min_margin = float(min_margin)
        self.updates = int(updates)

    @property
    def norm(self):
        return float(np.linalg.norm(self.u_star))

    @property
    def margin(self):
        return 1.0 / self.norm

    @property
    def kkt(self):
        return {'feasibility': self.feasibility,
                'stationarity': self.stationarity,
                'complementarity': self.complementarity}

    def certified(self, tol):
        """Whether the stored residuals certify optimality, see :func:`within_tolerance`."""
        residuals = dict(self.kkt, duality_gap=self.duality_gap)
        return within_tolerance(residuals, self.norm, float(self.alpha.sum()), tol)

    def to_dictionary(self):
        return {
            'u_star': self.u_star.tolist(),
            'margin': self.margin,
            'support_indices': self.support,
            'kkt': self.kkt,
            'alpha': self.alpha.tolist(),
            'duality_gap': self.duality_gap,
            'min_margin': self.min_margin,
            'updates': self.updates,
        }

    @classmethod
    def from_dictionary(cls, arguments):
        kkt = arguments['kkt']
        return cls(arguments['u_star'], arguments.get('alpha', []),
                   arguments['support_indices'], kkt['feasibility'],
                   kkt['stationarity'], kkt['complementarity'],
                   arguments.get('duality_gap', 0.0),
                   arguments.get('min_margin', np.nan),
                   arguments.get('updates', 0))

    def __repr__(self):
        return "<MarginSolution: margin=%.6g, |support|=%d>" % (self.margin, len(self.support))


def kkt_residuals(points, labels, u, alpha):
    """KKT residuals of a candidate primal/dual pair.

    Returns:
        dict: ``feasibility``, ``stationarity``, ``complementarity``,
            ``duality_gap`` and ``min_margin``.
    """
    combined = points.T.dot(alpha * labels)
    margins = labels * points.dot(u)
    primal = 0.5 * u.dot(u)
    dual = alpha.sum() - 0.5 * combined.dot(combined)
    return {
        'feasibility': float(max(0.0, 1.0 - margins.min())),
        'stationarity': float(np.linalg.norm(u - combined)),
        'complementarity': float(np.max(alpha * np.abs(margins - 1.0))),
        'duality_gap': float(primal - dual),
        'min_margin': float(margins.min()),
    }


@njit
def _coordinate_epochs(points, labels, sq_norms, alpha, w, n_epochs):
    n, d = points.shape
    for _ in range(n_epochs):
        for i in range(n):
            margin = 0.0
            for k in range(d):
                margin += points[i, k] * w[k]
            margin *= labels[i]
            updated = alpha[i] + (1.0 - margin) / sq_norms[i]
            if updated < 0.0:
                updated = 0.0
            delta = updated - alpha[i]
            if delta != 0.0:
                alpha[i] = updated
                scale = delta * labels[i]
                for k in range(d):
                    w[k] += scale * points[i, k]


def _check_trivially_inseparable(points, labels):
    norms = np.linalg.norm(points, axis=1)
    if np.any(norms == 0):
        raise NotSeparableError("Point %d is the zero vector and cannot be separated"
                                % int(np.argmax(norms == 0)))
    seen = {}
    for i, (point, label) in enumerate(zip(points, labels)):
        key = point.tobytes()
        if key in seen and labels[seen[key]] != label:
            raise NotSeparableError("Points %d and %d coincide with opposite labels"
                                    % (seen[key], i))
        seen.setdefault(key, i)


def _solve_on_active_set(points, labels, active):
    """Least-norm ``u`` with margin exactly 1 on ``active`` and its non-negative duals."""
    signed = labels[active][:, np.newaxis] * points[active]
    u, _, _, _ = lstsq(signed, np.ones(signed.shape[0]))
    try:
        coefficients, _ = nnls(signed.T, u)
    except RuntimeError:
        return None
    alpha = np.zeros(len(labels))
    alpha[active] = coefficients
    return u, alpha


def polish(points, labels, alpha, u, tol):
    """Finish a coordinate-ascent iterate on its active set.

    Seeds an active set from the iterate (positive duals, duals above a
    fraction of the largest one, or margins close to 1), solves it exactly
    and repeatedly adds points that violate the margin and drops points the
    non-negative fit leaves at zero, until the KKT residuals certify.

    Returns:
        (np.ndarray, np.ndarray, dict) or None: ``(u, alpha, residuals)`` of a
            certified solution, ``None`` when no seed leads to one.
    """
    margins = labels * points.dot(u)
    seeds = [alpha > 0,
             alpha > ACTIVE_FRACTION * alpha.max(),
             np.abs(margins - 1.0) <= ACTIVE_MARGIN]
    tried = set()
    for seed in seeds:
        active = seed.copy()
        for _ in range(REFINE_ROUNDS):
            key = active.tobytes()
            if not active.any() or key in tried:
                break
            tried.add(key)
            solved = _solve_on_active_set(points, labels, active)
            if solved is None:
                break
            candidate_u, candidate_alpha = solved
            residuals = kkt_residuals(points, labels, candidate_u, candidate_alpha)
            if within_tolerance(residuals, float(np.linalg.norm(candidate_u)),
                                float(candidate_alpha.sum()), tol):
                return candidate_u, candidate_alpha, residuals
            violated = labels * points.dot(candidate_u) < 1.0 - tol
            idle = active & (candidate_alpha == 0)
            if not violated.any() and not idle.any():
                break
            active = (active & ~idle) | violated
    return None


def solve_max_margin(pooled, tol=None, max_updates=None, divergence_threshold=None):
    """Hard-margin, bias-free max-margin separator by dual coordinate ascent.

    Maximizes ``sum_n alpha_n - |sum_n alpha_n y_n v_n|^2 / 2`` over
    ``alpha >= 0`` one coordinate at a time with the exact clipped update
    ``alpha_n <- max(0, alpha_n + (1 - y_n <w, v_n>) / |v_n|^2)``, keeping
    ``w = sum_n alpha_n y_n v_n`` up to date incrementally. After every batch
    of updates the iterate is checked, then finished on its active set with
    :func:`polish`.

    Args:
        pooled (PooledDataset): Points and labels.
        tol (float, optional): Tolerance of the KKT certificate, see
            :func:`within_tolerance`. Defaults to the ``margin_tolerance``
            config value.
        max_updates (int, optional): Cap on coordinate updates. Defaults to
            the ``max_margin_updates`` config value.
        divergence_threshold (float, optional): A dual variable past this
            value means the data is not separable. Defaults to the
            ``divergence_threshold`` config value.

    Returns:
        MarginSolution

    Raises:
        NotSeparableError: The points admit no strict separator.
        ConvergenceError: The cap was hit without a certificate.
    """
    if tol is None:
        tol = config.get("margin_tolerance")
    if max_updates is None:
        max_updates = config.get("max_margin_updates")
    if divergence_threshold is None:
        divergence_threshold = config.get("divergence_threshold")
    if len(pooled) == 0:
        raise ValidationError("Cannot solve for an empty point set")

    points = np.ascontiguousarray(pooled.points, dtype=np.float64)
    labels = np.ascontiguousarray(pooled.labels, dtype=np.float64)
    _check_trivially_inseparable(points, labels)

    n = points.shape[0]
    sq_norms = np.einsum('ij,ij->i', points, points)
    alpha = np.zeros(n)
    w = np.zeros(points.shape[1])
    epochs_per_check = max(1, UPDATES_PER_CHECK // n)
    updates = 0

    while True:
        epochs = min(epochs_per_check, -(-(max_updates - updates) // n))
        _coordinate_epochs(points, labels, sq_norms, alpha, w, epochs)
        updates += epochs * n
        largest = float(alpha.max())
        if largest > divergence_threshold:
            raise NotSeparableError("Dual variables diverged (max alpha %.3g after %d updates)"
                                    % (largest, updates))

        u = points.T.dot(alpha * labels)
        residuals = kkt_residuals(points, labels, w, alpha)
        # resync the incremental primal with the dual
        w[:] = u
        residuals.update(kkt_residuals(points, labels, u, alpha),
                         stationarity=residuals['stationarity'])
        if within_tolerance(residuals, float(np.linalg.norm(u)), float(alpha.sum()), tol):
            break
        polished = polish(points, labels, alpha, u, tol)
        if polished is not None:
            u, alpha, residuals = polished
            logger.debug("active-set finish certified after %d updates" % updates)
            break
        if updates >= max_updates:
            raise ConvergenceError("No KKT certificate within %d updates (max alpha %.3g, "
                                   "residuals %s)" % (max_updates, largest, residuals))

    support = np.flatnonzero(alpha > tol)
    logger.debug("max-margin solve: %d points, %d updates, margin %.6g, %d support points"
                 % (n, updates, 1.0 / np.linalg.norm(u), len(support)))
    return MarginSolution(u, alpha, support, residuals['feasibility'],
                          residuals['stationarity'], residuals['complementarity'],
                          residuals['duality_gap'], residuals['min_margin'], updates)
