# flake8: noqa
from .loss import LossBreakdown, example_losses, j_prime, logistic_loss, softplus
from .analytic import (
    GradientPair,
    grad_u,
    grad_W,
    gradient_norm_bounds,
    gradients,
    loss_and_gradients
)
from .finite_difference import compare_gradients, fd_gradient
