import logging
import os

import numpy as np

from attndynamics.config_init import config as global_config
from attndynamics.diagnostics.metrics import export_csv, record
from attndynamics.exceptions import (
    ArtifactIOError,
    ConvergenceError,
    DivergenceError,
    NotSeparableError,
    ValidationError
)
from attndynamics.gradients.analytic import (
    gradient_norm_bounds,
    gradients,
    loss_and_gradients
)
from attndynamics.gradients.loss import logistic_loss
from attndynamics.maxmargin.pooling import pool_dataset
from attndynamics.maxmargin.solver import solve_max_margin
from attndynamics.model.params import ModelParams, save_checkpoint
from attndynamics.model.transformer import batch_attention
from attndynamics.training.train_config import build_dataset
from attndynamics.training.trajectory import (
    CONFIG_FILE,
    MAX_MARGIN_FILE,
    METRICS_FILE,
    Trajectory,
    checkpoint_filename
)
from attndynamics.utils.gen_utils import dump_json, make_tqdm_iterator

logger = logging.getLogger('attndynamics.training')


def init_params(config):
    """Zero-initialized model at the dimension the task needs."""
    return ModelParams.zeros(config.d, config.lambda_)


def attention_learning_rate(config, t):
    """Step size of the ``W`` update at step ``t``.

    The two-phase schedule scales it by lambda during the first ``t0`` steps.
    """
    if config.schedule == 'two_phase' and t < config.t0:
        return config.eta * config.lambda_
    return config.eta


def step(params, dataset, config, t, grads=None):
    """One full-batch gradient step from ``params`` at step index ``t``.

    Args:
        params (ModelParams): Current parameters.
        dataset (TaskDataset): Training set.
        config (TrainConfig): Supplies eta, lambda, t0 and the schedule.
        t (int): Index of the current step, starting at 0.
        grads (GradientPair, optional): Gradients at ``params`` if already known.

    Returns:
        ModelParams: The updated parameters.
    """
    if t < 0:
        raise ValidationError("Step index must be non-negative, got %r" % (t,))
    if grads is None:
        grads = gradients(params, dataset)
    return params.replace(u=params.u - config.eta * grads.grad_u,
                          W=params.W - attention_learning_rate(config, t) * grads.grad_W)


def parity_loss_components(params, dataset):
    """Split the parity-CoT loss into its CoT and regularizing parts.

    Returns:
        (float, float): ``(cot, reg)``.
    """
    if dataset.task != 'parity_cot':
        raise ValidationError("Loss components are defined for the parity_cot task, got %r"
                              % (dataset.task,))
    loss = logistic_loss(params, dataset)
    return loss.cot_component, loss.reg_component


def accuracy(params, dataset):
    """Number of correctly classified examples and the dataset size."""
    correct = 0
    for group in dataset.groups:
        _, _, logits = batch_attention(params, group.indices)
        predictions = np.where(logits >= 0, 1.0, -1.0)
        correct += int(np.sum(predictions == group.labels))
    return correct, len(dataset)


def snapshot_steps(config):
    steps = set(range(0, config.total_steps + 1, config.snapshot_every))
    steps.update([0, config.t0, config.total_steps])
    return steps


def _solve_margin(params, dataset, t):
    pooled = pool_dataset(params, dataset, step=t)
    try:
        solution = solve_max_margin(pooled)
    except (NotSeparableError, ConvergenceError) as e:
        logger.warning("No max-margin solution at step %d, alignment will not be "
                       "recorded: %s" % (t, e))
        return None
    logger.info("Pooled dataset at step %d is separable: margin %.6g, %d support points"
                % (t, solution.margin, len(solution.support)))
    return solution


def _prepare_out_dir(out_dir, config):
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as e:
        raise ArtifactIOError(out_dir, e.strerror or str(e))
    dump_json(config.copy(out_dir=out_dir).to_dictionary(), os.path.join(out_dir, CONFIG_FILE))


def train(config, out_dir=None, verbose=False):
    """Run full-batch gradient descent from zero initialization.

    Snapshots are taken every ``snapshot_every`` steps and at steps 0,
    ``t0`` and ``total_steps``. At ``t0`` the dataset is pooled with the
    current attention and its max-margin separator is solved; later records
    report their alignment with it.

    Args:
        config (TrainConfig): Run configuration.
        out_dir (str, optional): Directory for ``config-as-run.json``,
            checkpoints, ``metrics.csv`` and ``max_margin.json``. Defaults to
            ``config.out_dir``; nothing is written when both are ``None``.
        verbose (bool): Show a progress bar.

    Returns:
        Trajectory

    Raises:
        DivergenceError: The loss became non-finite or exceeded the guard.
    """
    if out_dir is None:
        out_dir = config.out_dir
    dataset = build_dataset(config)
    params = init_params(config)
    trajectory = Trajectory(config)
    snapshots = snapshot_steps(config)
    loss_guard = global_config.get("loss_guard")
    if out_dir is not None:
        _prepare_out_dir(out_dir, config)

    logger.info("Training %s (%s schedule): d=%d, %d examples, %d steps, "
                "eta=%r, lambda=%r, t0=%d" % (config.task, config.schedule, config.d,
                                               len(dataset), config.total_steps,
                                               config.eta, config.lambda_, config.t0))

    steps = range(config.total_steps + 1)
    if verbose:
        steps = make_tqdm_iterator(iterable=steps, total=config.total_steps + 1,
                                   desc="Training", unit="step")

    reference_W = None
    u_star = None
    for t in steps:
        loss, grads = loss_and_gradients(params, dataset)
        if not loss.is_finite() or loss.total > loss_guard:
            raise DivergenceError(t, loss.total)

        if t == config.t0:
            reference_W = params.W.copy()
            trajectory.margin_solution = _solve_margin(params, dataset, t)
            u_star = trajectory.u_star

        if t in snapshots:
            metrics = record(params, t, dataset, u_star=u_star,
                             reference_W=reference_W, loss=loss)
            trajectory.add_snapshot(metrics, params,
                                    gradient_norm_bounds(params, dataset, grads=grads))
            if out_dir is not None:
                save_checkpoint(params, os.path.join(out_dir, checkpoint_filename(t)),
                                step=t, task=config.task)

        if t < config.total_steps:
            params = step(params, dataset, config, t, grads=grads)

    correct, total = accuracy(params, dataset)
    logger.info("Finished %d steps: loss %.6g, training accuracy %d/%d"
                % (config.total_steps, trajectory.records[-1].loss, correct, total))

    if out_dir is not None:
        export_csv(trajectory, os.path.join(out_dir, METRICS_FILE))
        if trajectory.margin_solution is not None:
            dump_json(trajectory.margin_solution.to_dictionary(),
                      os.path.join(out_dir, MAX_MARGIN_FILE))
    return trajectory
