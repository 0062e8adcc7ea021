import numpy as np

from attndynamics.exceptions import ArtifactIOError, ValidationError
from attndynamics.utils.gen_utils import dump_json, load_json

CHECKPOINT_KEYS = ['d', 'lambda', 'u', 'W', 'step', 'task']


class ModelParams(object):
    """Trainable state of the one-layer transformer.

    ``u`` is the linear layer, ``W`` the attention matrix and ``lambda_`` the
    softmax scaling. Instances are treated as immutable: training returns new
    objects instead of updating arrays in place.

    Args:
        u (array-like): Vector of length d.
        W (array-like): ``d x d`` matrix.
        lambda_ (float): Positive softmax scaling.
    """

    def __init__(self, u, W, lambda_):
        u = np.array(u, dtype=np.float64)
        W = np.array(W, dtype=np.float64)
        if u.ndim != 1:
            raise ValidationError("u must be a vector, got shape %s" % (u.shape,))
        d = u.shape[0]
        if W.shape != (d, d):
            raise ValidationError("W must have shape (%d, %d), got %s" % (d, d, W.shape))
        if not lambda_ > 0:
            raise ValidationError("lambda must be positive, got %r" % (lambda_,))
        self.u = u
        self.W = W
        self.lambda_ = float(lambda_)

    @classmethod
    def zeros(cls, d, lambda_):
        return cls(np.zeros(d), np.zeros((d, d)), lambda_)

    @property
    def d(self):
        return self.u.shape[0]

    @property
    def max_length(self):
        return self.d // 2

    def replace(self, u=None, W=None):
        return ModelParams(self.u if u is None else u,
                           self.W if W is None else W,
                           self.lambda_)

    def to_dictionary(self, step=None, task=None):
        return {
            'd': self.d,
            'lambda': self.lambda_,
            'u': self.u.tolist(),
            'W': self.W.ravel().tolist(),
            'step': step,
            'task': task,
        }

    @classmethod
    def from_dictionary(cls, arguments):
        missing = [k for k in ['d', 'lambda', 'u', 'W'] if k not in arguments]
        if missing:
            raise ValidationError("Checkpoint is missing keys %s" % missing)
        d = int(arguments['d'])
        u = np.array(arguments['u'], dtype=np.float64)
        W = np.array(arguments['W'], dtype=np.float64)
        if u.shape != (d,) or W.size != d * d:
            raise ValidationError("Checkpoint arrays do not match d=%d" % d)
        return cls(u, W.reshape(d, d), arguments['lambda'])

    def __eq__(self, other):
        if not isinstance(other, ModelParams):
            return False
        return (self.lambda_ == other.lambda_ and
                np.array_equal(self.u, other.u) and
                np.array_equal(self.W, other.W))

    def __repr__(self):
        return "<ModelParams: d=%d, lambda=%r, |u|=%.6g, |W|=%.6g>" % (
            self.d, self.lambda_, np.linalg.norm(self.u), np.linalg.norm(self.W))


def save_checkpoint(params, path, step=None, task=None):
    """Write ``params`` as a JSON checkpoint; floats round-trip exactly."""
    dump_json(params.to_dictionary(step=step, task=task), path)


def load_checkpoint(path):
    """Read a checkpoint written by :func:`save_checkpoint`.

    Returns:
        (ModelParams, dict): The parameters and the ``step``/``task`` metadata.
    """
    data = load_json(path)
    if not isinstance(data, dict):
        raise ArtifactIOError(path, "checkpoint must be a JSON object")
    params = ModelParams.from_dictionary(data)
    return params, {'step': data.get('step'), 'task': data.get('task')}
