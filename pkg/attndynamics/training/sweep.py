import logging
import os

import dask
import pandas as pd

from attndynamics.exceptions import ValidationError
from attndynamics.training.train_config import build_dataset
from attndynamics.training.trainer import accuracy, train
from attndynamics.utils.gen_utils import n_jobs_to_workers

logger = logging.getLogger('attndynamics.training')

SUMMARY_COLUMNS = ['lambda', 'schedule', 'final_loss', 'correct', 'total',
                   'final_align', 'out_dir']


def sweep_directory(base_dir, lambda_):
    """Subdirectory of one sweep member, e.g. ``lambda_10``."""
    return os.path.join(base_dir, 'lambda_%s' % ('%g' % lambda_))


def _run_member(config):
    trajectory = train(config)
    dataset = build_dataset(config)
    correct, total = accuracy(trajectory.final_params(), dataset)
    final = trajectory.records[-1]
    return {
        'lambda': config.lambda_,
        'schedule': config.schedule,
        'final_loss': final.loss,
        'correct': correct,
        'total': total,
        'final_align': final.align,
        'out_dir': config.out_dir,
    }


def run_sweep(config, lambdas, out_dir=None, schedule=None, n_jobs=1):
    """Train one run per lambda, each in its own subdirectory.

    Args:
        config (TrainConfig): Base configuration.
        lambdas (list[float]): Scaling values to sweep.
        out_dir (str, optional): Parent directory. Defaults to ``config.out_dir``.
        schedule (str, optional): Schedule overriding the base configuration.
        n_jobs (int): Number of parallel processes. ``1`` runs sequentially,
            negative values count back from the number of CPUs.

    Returns:
        pd.DataFrame: One summary row per lambda.
    """
    if not lambdas:
        raise ValidationError("A sweep needs at least one lambda value")
    if out_dir is None:
        out_dir = config.out_dir
    if out_dir is None:
        raise ValidationError("A sweep needs an output directory")
    configs = []
    for value in lambdas:
        changes = {'lambda': value, 'out_dir': sweep_directory(out_dir, value)}
        if schedule is not None:
            changes['schedule'] = schedule
        configs.append(config.copy(**changes))

    if n_jobs == 1:
        rows = [_run_member(c) for c in configs]
    else:
        workers = n_jobs_to_workers(n_jobs)
        logger.info("Running %d sweep members on %d processes" % (len(configs), workers))
        tasks = [dask.delayed(_run_member)(c) for c in configs]
        rows = list(dask.compute(*tasks, scheduler='processes', num_workers=workers))
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)
