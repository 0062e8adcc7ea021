import numpy as np

from attndynamics.gradients.loss import j_prime, softplus, summarize_losses
from attndynamics.model.transformer import batch_attention


class GradientPair(object):
    def __init__(self, grad_u, grad_W):
        self.grad_u = grad_u
        self.grad_W = grad_W

    def norms(self):
        """Euclidean norm of ``grad_u`` and Frobenius norm of ``grad_W``."""
        return float(np.linalg.norm(self.grad_u)), float(np.linalg.norm(self.grad_W))

    def __repr__(self):
        return "<GradientPair: |grad_u|=%.6g, |grad_W|=%.6g>" % self.norms()


def loss_and_gradients(params, dataset):
    """Loss and closed-form gradients from a single pass over the dataset.

    For an example with attention phi, token scores tau and logit T, and
    coefficient ``c = weight * J' * y``:

    - ``grad_u`` gains ``c * phi_l`` at the embedding of every position l;
    - ``grad_W`` gains ``c * phi_l * (tau_l - T) / lambda`` at the entry
      (key embedding of l, query embedding of the last position).

    Within a length class the positive and the negative examples are
    accumulated separately and only then added. When both label classes
    contribute equal magnitudes to a coordinate, as they do at zero
    initialization, the two partial sums are exact negatives and the
    coordinate is exactly 0.

    Returns:
        (LossBreakdown, GradientPair)
    """
    d = params.d
    total_u = np.zeros(d)
    total_W = np.zeros((d, d))
    group_losses = []
    for group in dataset.groups:
        phi, scores, logits = batch_attention(params, group.indices)
        group_losses.append(float(np.dot(group.weights, softplus(group.labels * logits))))
        coef = group.weights * j_prime(group.labels, logits) * group.labels
        u_values = coef[:, np.newaxis] * phi
        W_values = u_values * (scores - logits[:, np.newaxis]) / params.lambda_
        queries = np.broadcast_to(group.indices[:, -1:], group.indices.shape)

        parts_u = []
        parts_W = []
        for label in (1.0, -1.0):
            mask = group.labels == label
            g_u = np.zeros(d)
            np.add.at(g_u, group.indices[mask], u_values[mask])
            parts_u.append(g_u)
            g_W = np.zeros((d, d))
            np.add.at(g_W, (group.indices[mask], queries[mask]), W_values[mask])
            parts_W.append(g_W)
        total_u += parts_u[0] + parts_u[1]
        total_W += parts_W[0] + parts_W[1]
    return summarize_losses(dataset, group_losses), GradientPair(total_u, total_W)


def gradients(params, dataset):
    return loss_and_gradients(params, dataset)[1]


def grad_u(params, dataset):
    """Analytic gradient of the logistic loss with respect to ``u``."""
    return gradients(params, dataset).grad_u


def grad_W(params, dataset):
    """Analytic gradient of the logistic loss with respect to ``W``."""
    return gradients(params, dataset).grad_W


def gradient_norm_bounds(params, dataset, grads=None):
    """Gradient norms next to their a-priori bounds.

    ``|grad_u| <= L_max`` and ``|grad_W|_F <= |u| * L_max / lambda`` where
    L_max is the longest sequence length in the dataset.
    """
    if grads is None:
        grads = gradients(params, dataset)
    norm_u, norm_W = grads.norms()
    l_max = dataset.max_length
    return {
        'grad_u_norm': norm_u,
        'grad_u_bound': float(l_max),
        'grad_W_norm': norm_W,
        'grad_W_bound': float(np.linalg.norm(params.u) * l_max / params.lambda_),
    }
