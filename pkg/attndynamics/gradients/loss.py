from collections import OrderedDict

import numpy as np
from scipy.special import expit

from attndynamics.model.transformer import batch_attention


def softplus(margin):
    """``log(1 + exp(-margin))`` without overflow for large ``|margin|``."""
    margin = np.asarray(margin, dtype=np.float64)
    return np.log1p(np.exp(-np.abs(margin))) + np.maximum(-margin, 0.0)


def j_prime(y, logit):
    """Derivative of the logistic loss at the margin: ``-1 / (1 + exp(y * logit))``.

    >>> float(j_prime(1, 0.0))
    -0.5
    """
    return -expit(-np.asarray(y, dtype=np.float64) * logit)


class LossBreakdown(object):
    """Weighted logistic loss split by length class.

    ``cot_component`` and ``reg_component`` are set only for the parity-CoT
    task and are ``None`` otherwise.
    """

    def __init__(self, total, per_length, cot_component=None, reg_component=None):
        self.total = total
        self.per_length = per_length
        self.cot_component = cot_component
        self.reg_component = reg_component

    def is_finite(self):
        return bool(np.isfinite(self.total))

    def __repr__(self):
        return "<LossBreakdown: total=%r, cot=%r, reg=%r>" % (
            self.total, self.cot_component, self.reg_component)


def summarize_losses(dataset, group_losses):
    per_length = OrderedDict()
    cot = 0.0
    reg = 0.0
    for group, value in zip(dataset.groups, group_losses):
        per_length[group.length] = value
        if group.task_tag == 'cot_step':
            cot += value
        elif group.task_tag == 'cot_reg':
            reg += value
    total = 0.0
    for value in per_length.values():
        total += value
    if dataset.task == 'parity_cot':
        return LossBreakdown(total, per_length, cot, reg)
    return LossBreakdown(total, per_length)


def logistic_loss(params, dataset):
    """Sum over length classes of the weighted mean logistic loss.

    Args:
        params (ModelParams): Model state.
        dataset (TaskDataset): Weighted examples.

    Returns:
        LossBreakdown
    """
    group_losses = []
    for group in dataset.groups:
        _, _, logits = batch_attention(params, group.indices)
        group_losses.append(float(np.dot(group.weights, softplus(group.labels * logits))))
    return summarize_losses(dataset, group_losses)


def example_losses(params, dataset):
    """Weighted loss of every example, in dataset order."""
    values = []
    for group in dataset.groups:
        _, _, logits = batch_attention(params, group.indices)
        values.append(group.weights * softplus(group.labels * logits))
    return np.concatenate(values)
