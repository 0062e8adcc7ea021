import json
import os

from attndynamics.config_init import config
from attndynamics.exceptions import ArtifactIOError, ConfigError
from attndynamics.sequences.dataset import (
    build_task_dataset,
    even_pairs_dimension,
    parity_cot_dimension
)

TASKS = ('even_pairs', 'parity_cot')
SCHEDULES = ('two_phase', 'vanilla')
CONFIG_KEYS = ('task', 'l_max', 'l0', 'eta', 'lambda', 't0', 'total_steps',
               'schedule', 'snapshot_every', 'out_dir')


class TrainConfig(object):
    """Resolved configuration of a training run.

    Keys mirror the JSON config file; ``lambda`` is stored as ``lambda_``.
    Defaults are the reference experiment: L_max=6, L_0=4, eta=0.1,
    lambda=2, t_0=100 and 5000 steps with a snapshot every 10 steps.
    """

    def __init__(self, task, l_max=6, l0=4, eta=0.1, lambda_=2.0, t0=100,
                 total_steps=5000, schedule='two_phase', snapshot_every=10,
                 out_dir=None):
        self.task = task
        self.l_max = l_max
        self.l0 = l0
        self.eta = eta
        self.lambda_ = lambda_
        self.t0 = t0
        self.total_steps = total_steps
        self.schedule = schedule
        self.snapshot_every = snapshot_every
        self.out_dir = out_dir
        self.validate()

    def validate(self):
        if self.task not in TASKS:
            raise ConfigError('task', "must be one of %s, got %r" % (TASKS, self.task))
        if self.schedule not in SCHEDULES:
            raise ConfigError('schedule', "must be one of %s, got %r"
                              % (SCHEDULES, self.schedule))
        for field in ('l_max', 'l0', 't0', 'total_steps', 'snapshot_every'):
            value = getattr(self, field)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(field, "must be an integer, got %r" % (value,))
        for field, attr in (('eta', 'eta'), ('lambda', 'lambda_')):
            value = getattr(self, attr)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
                raise ConfigError(field, "must be a positive number, got %r" % (value,))
        max_length = config.get("max_sequence_length")
        if not 1 <= self.l_max <= max_length:
            raise ConfigError('l_max', "must be in 1..%d, got %r" % (max_length, self.l_max))
        if not 2 <= self.l0 or 2 * self.l0 - 1 > max_length:
            raise ConfigError('l0', "must be in 2..%d, got %r"
                              % ((max_length + 1) // 2, self.l0))
        if not 0 <= self.t0 <= self.total_steps:
            raise ConfigError('t0', "must satisfy 0 <= t0 <= total_steps (%r), got %r"
                              % (self.total_steps, self.t0))
        if self.snapshot_every < 1:
            raise ConfigError('snapshot_every', "must be at least 1, got %r"
                              % (self.snapshot_every,))
        if self.out_dir is not None and not isinstance(self.out_dir, str):
            raise ConfigError('out_dir', "must be a path string, got %r" % (self.out_dir,))

    @property
    def d(self):
        if self.task == 'even_pairs':
            return even_pairs_dimension(self.l_max)
        return parity_cot_dimension(self.l0)

    @property
    def max_length(self):
        return self.l_max if self.task == 'even_pairs' else 2 * self.l0 - 1

    def copy(self, **changes):
        arguments = self.to_dictionary()
        arguments.update(changes)
        return TrainConfig.from_dictionary(arguments)

    def to_dictionary(self):
        return {
            'task': self.task,
            'l_max': self.l_max,
            'l0': self.l0,
            'eta': self.eta,
            'lambda': self.lambda_,
            't0': self.t0,
            'total_steps': self.total_steps,
            'schedule': self.schedule,
            'snapshot_every': self.snapshot_every,
            'out_dir': self.out_dir,
        }

    @classmethod
    def from_dictionary(cls, arguments):
        unknown = sorted(set(arguments) - set(CONFIG_KEYS))
        if unknown:
            raise ConfigError(unknown[0], "unknown config key")
        if 'task' not in arguments:
            raise ConfigError('task', "missing required key")
        arguments = dict(arguments)
        if 'lambda' in arguments:
            arguments['lambda_'] = arguments.pop('lambda')
        return cls(**arguments)

    def __eq__(self, other):
        return isinstance(other, TrainConfig) and self.to_dictionary() == other.to_dictionary()

    def __repr__(self):
        return "<TrainConfig: %s>" % self.to_dictionary()


def resolve_config_path(path):
    """Return ``path`` itself, or the shipped preset of that name when it does not exist."""
    if os.path.exists(path):
        return path
    presets_folder = config.get("presets_folder")
    for candidate in (path, path + '.json'):
        preset = os.path.join(presets_folder, os.path.basename(candidate))
        if os.path.exists(preset):
            return preset
    return path


def load_config(path, **overrides):
    """Read a JSON run configuration; keyword overrides take precedence.

    An empty file is an empty configuration. Unknown keys and invalid values
    raise :class:`ConfigError` naming the field. Overrides whose value is
    ``None`` are ignored.

    Args:
        path (str): Config file, or the name of a shipped preset such as
            ``paper_even_pairs.json``.
        overrides: Values replacing those of the file (``lambda`` may be
            given as ``lambda_``).

    Returns:
        TrainConfig
    """
    path = resolve_config_path(path)
    try:
        with open(path, 'r') as f:
            text = f.read()
    except OSError as e:
        raise ArtifactIOError(path, e.strerror or str(e))
    if text.strip():
        try:
            arguments = json.loads(text)
        except ValueError as e:
            raise ConfigError('<file>', "malformed JSON in %s (%s)" % (path, e))
        if not isinstance(arguments, dict):
            raise ConfigError('<file>', "%s must hold a JSON object" % path)
    else:
        arguments = {}
    for key, value in overrides.items():
        if value is None:
            continue
        arguments['lambda' if key == 'lambda_' else key] = value
    return TrainConfig.from_dictionary(arguments)


def build_dataset(config):
    """The training set of a configuration."""
    return build_task_dataset(config.task, l_max=config.l_max, l0=config.l0)
