import numpy as np

from attndynamics.config_init import config
from attndynamics.exceptions import ValidationError
from attndynamics.gradients.analytic import GradientPair, gradients
from attndynamics.gradients.loss import example_losses


def _central_difference(loss_at, base, h):
    grad = np.zeros(base.size)
    flat = base.ravel()
    for i in range(base.size):
        up = flat.copy()
        down = flat.copy()
        up[i] += h
        down[i] -= h
        # difference example by example before summing keeps rounding local
        diff = loss_at(up.reshape(base.shape)) - loss_at(down.reshape(base.shape))
        grad[i] = np.sum(diff) / (2 * h)
    return grad.reshape(base.shape)


def fd_gradient(params, dataset, h=None):
    """Central finite-difference approximation of both gradients.

    Args:
        params (ModelParams): Point of evaluation.
        dataset (TaskDataset): Weighted examples.
        h (float, optional): Step. Defaults to the ``fd_step`` config value.

    Returns:
        GradientPair
    """
    if h is None:
        h = config.get("fd_step")
    if not h > 0:
        raise ValidationError("Finite-difference step must be positive, got %r" % (h,))
    g_u = _central_difference(lambda u: example_losses(params.replace(u=u), dataset),
                              params.u, h)
    g_W = _central_difference(lambda W: example_losses(params.replace(W=W), dataset),
                              params.W, h)
    return GradientPair(g_u, g_W)


def _relative_errors(analytic, numeric, scale):
    magnitude = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), scale)
    return np.abs(analytic - numeric) / magnitude


def compare_gradients(params, dataset, h=None, tolerance=None, abs_floor=None):
    """Compare analytic and finite-difference gradients coordinate by coordinate.

    The relative error of a coordinate is ``|a - f| / max(|a|, |f|, s)`` with
    ``s = abs_floor / tolerance``, so coordinates smaller than ``s`` are held
    to the absolute error ``abs_floor`` instead.

    Returns:
        dict: ``max_rel_error_u``, ``max_rel_error_W``, ``max_abs_error_u``,
            ``max_abs_error_W`` and ``passed``.
    """
    if tolerance is None:
        tolerance = config.get("fd_tolerance")
    if abs_floor is None:
        abs_floor = config.get("fd_abs_floor")
    scale = abs_floor / tolerance
    analytic = gradients(params, dataset)
    numeric = fd_gradient(params, dataset, h=h)
    rel_u = _relative_errors(analytic.grad_u, numeric.grad_u, scale)
    rel_W = _relative_errors(analytic.grad_W, numeric.grad_W, scale)
    summary = {
        'max_rel_error_u': float(rel_u.max()),
        'max_rel_error_W': float(rel_W.max()),
        'max_abs_error_u': float(np.abs(analytic.grad_u - numeric.grad_u).max()),
        'max_abs_error_W': float(np.abs(analytic.grad_W - numeric.grad_W).max()),
    }
    summary['passed'] = bool(max(summary['max_rel_error_u'],
                                 summary['max_rel_error_W']) <= tolerance)
    return summary
