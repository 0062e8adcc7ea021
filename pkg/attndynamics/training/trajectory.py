import os
import re
from collections import OrderedDict

from attndynamics.diagnostics.metrics import metrics_frame, read_metrics_csv
from attndynamics.exceptions import TrajectoryError
from attndynamics.maxmargin.solver import MarginSolution
from attndynamics.model.params import load_checkpoint
from attndynamics.training.train_config import TrainConfig
from attndynamics.utils.gen_utils import load_json

CONFIG_FILE = 'config-as-run.json'
METRICS_FILE = 'metrics.csv'
MAX_MARGIN_FILE = 'max_margin.json'
CHECKPOINT_PATTERN = re.compile(r'^ckpt_(\d+)\.json$')


def checkpoint_filename(step):
    return 'ckpt_%d.json' % step


class Trajectory(object):
    """Snapshots of a training run: metric records and parameter checkpoints.

    Args:
        config (TrainConfig): Configuration the run used.
    """

    def __init__(self, config):
        self.config = config
        self.records = []
        self.checkpoints = OrderedDict()
        self.gradient_bounds = OrderedDict()
        self.margin_solution = None

    def add_snapshot(self, record, params=None, bounds=None):
        if self.records and record.t <= self.records[-1].t:
            raise TrajectoryError("Snapshot steps must increase: %d after %d"
                                  % (record.t, self.records[-1].t))
        self.records.append(record)
        if params is not None:
            self.checkpoints[record.t] = params
        if bounds is not None:
            self.gradient_bounds[record.t] = bounds

    @property
    def steps(self):
        return [r.t for r in self.records]

    @property
    def u_star(self):
        if self.margin_solution is None:
            return None
        return self.margin_solution.u_star

    def record_at(self, step):
        for r in self.records:
            if r.t == step:
                return r
        raise TrajectoryError("No snapshot recorded at step %d" % step)

    def checkpoint_at(self, step):
        if step not in self.checkpoints:
            raise TrajectoryError("No checkpoint stored at step %d" % step)
        return self.checkpoints[step]

    def final_params(self):
        if not self.checkpoints:
            raise TrajectoryError("Trajectory holds no checkpoints")
        return self.checkpoints[next(reversed(self.checkpoints))]

    def metrics_frame(self):
        return metrics_frame(self.records)

    def __repr__(self):
        return "<Trajectory: %s, %d snapshots>" % (self.config.task, len(self.records))


def read_trajectory(run_dir):
    """Load a run directory written by ``train`` back into a :class:`Trajectory`."""
    if not os.path.isdir(run_dir):
        raise TrajectoryError("Run directory %s does not exist" % run_dir)
    config_path = os.path.join(run_dir, CONFIG_FILE)
    metrics_path = os.path.join(run_dir, METRICS_FILE)
    for path in (config_path, metrics_path):
        if not os.path.exists(path):
            raise TrajectoryError("Run directory %s lacks %s" % (run_dir, os.path.basename(path)))

    trajectory = Trajectory(TrainConfig.from_dictionary(load_json(config_path)))
    checkpoints = {}
    for name in os.listdir(run_dir):
        match = CHECKPOINT_PATTERN.match(name)
        if match:
            params, _ = load_checkpoint(os.path.join(run_dir, name))
            checkpoints[int(match.group(1))] = params
    for record in read_metrics_csv(metrics_path):
        trajectory.add_snapshot(record, checkpoints.get(record.t))

    margin_path = os.path.join(run_dir, MAX_MARGIN_FILE)
    if os.path.exists(margin_path):
        trajectory.margin_solution = MarginSolution.from_dictionary(load_json(margin_path))
    return trajectory
