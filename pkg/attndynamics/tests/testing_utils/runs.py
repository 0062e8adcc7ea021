import numpy as np

from attndynamics.diagnostics.metrics import MetricRecord
from attndynamics.training.train_config import TrainConfig
from attndynamics.training.trajectory import Trajectory


def short_config(task='even_pairs', **changes):
    """Small run configuration that trains in well under a second."""
    arguments = dict(task=task, l_max=4, l0=3, t0=20, total_steps=60, snapshot_every=10)
    arguments.update(changes)
    return TrainConfig(**arguments)


def synthetic_trajectory(u_norms, losses=None, aligns=None, drifts=None, step=10,
                         config=None):
    """Trajectory of hand-made records taken every ``step`` steps from 0."""
    if config is None:
        config = TrainConfig('even_pairs', t0=100, total_steps=step * (len(u_norms) - 1))
    n = len(u_norms)
    if losses is None:
        losses = [1.0 / (1.0 + i) for i in range(n)]
    if aligns is None:
        aligns = [None] * n
    if drifts is None:
        drifts = [None] * n
    trajectory = Trajectory(config)
    for i in range(n):
        trajectory.add_snapshot(MetricRecord(i * step, losses[i], u_norm=u_norms[i],
                                             align=aligns[i], w_drift=drifts[i]))
    return trajectory


def frozen_trajectory(n=501, step=10):
    """A run whose linear layer never moves after step 100."""
    steps = np.arange(n) * step
    u_norms = np.where(steps < 100, steps / 100.0, 1.0)
    drifts = [None if t < 100 else 0.01 for t in steps]
    aligns = [None if t < 100 else 0.9 for t in steps]
    return synthetic_trajectory(list(u_norms), aligns=aligns, drifts=drifts, step=step)
