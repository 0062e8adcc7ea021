import numpy as np

from attndynamics.exceptions import ValidationError
from attndynamics.model.transformer import batch_attention
from attndynamics.sequences.sequence import embedding_index


class PooledDataset(object):
    """Attention-pooled points ``v_n = sum_l x_l phi_l`` with their labels.

    Args:
        points (np.ndarray): ``(N, d)`` pooled vectors.
        labels (np.ndarray): ``(N,)`` labels in ``{+1, -1}``.
        sequences (list[BinarySequence], optional): Source sequence of each point.
        step (int, optional): Training step of the checkpoint the points came from.
        task (str, optional): Task of the source dataset.
    """

    def __init__(self, points, labels, sequences=None, step=None, task=None):
        points = np.array(points, dtype=np.float64, ndmin=2)
        labels = np.array(labels, dtype=np.float64).ravel()
        if points.shape[0] != labels.shape[0]:
            raise ValidationError("Got %d points but %d labels"
                                  % (points.shape[0], labels.shape[0]))
        if not np.all(np.isin(labels, (1.0, -1.0))):
            raise ValidationError("Labels must be +1 or -1")
        self.points = points
        self.labels = labels
        self.sequences = sequences
        self.step = step
        self.task = task

    @property
    def d(self):
        return self.points.shape[1]

    def subset(self, indices):
        indices = list(indices)
        sequences = None
        if self.sequences is not None:
            sequences = [self.sequences[i] for i in indices]
        return PooledDataset(self.points[indices], self.labels[indices],
                             sequences=sequences, step=self.step, task=self.task)

    def __len__(self):
        return self.points.shape[0]

    def __repr__(self):
        return "<PooledDataset: %d points, d=%d, step=%s, task=%s>" % (
            len(self), self.d, self.step, self.task)


def pool_dataset(checkpoint, dataset, step=None):
    """Pool every example of ``dataset`` with the attention of ``checkpoint``."""
    points = []
    labels = []
    for group in dataset.groups:
        phi, _, _ = batch_attention(checkpoint, group.indices)
        block = np.zeros((len(group), checkpoint.d))
        rows = np.arange(len(group))[:, np.newaxis]
        # positions embed to distinct coordinates
        block[rows, group.indices] = phi
        points.append(block)
        labels.append(group.labels)
    return PooledDataset(np.vstack(points), np.concatenate(labels),
                         sequences=[e.sequence for e in dataset.examples],
                         step=step, task=dataset.task)


def is_separable_by(u, pooled):
    """Whether ``u`` strictly separates the pooled points.

    Returns:
        (bool, float): ``min_n y_n <u, v_n> > 0`` and that minimum.
    """
    margins = pooled.labels * pooled.points.dot(np.asarray(u, dtype=np.float64))
    minimum = float(margins.min())
    return minimum > 0, minimum


def canonical_even_pairs_separator(d):
    """``E_1^a + E_1^b - E_2^a - E_2^b`` at dimension ``d``."""
    if d < 4:
        raise ValidationError("The canonical separator needs d >= 4, got %d" % d)
    u = np.zeros(d)
    u[[embedding_index(1, 'a'), embedding_index(1, 'b')]] = 1.0
    u[[embedding_index(2, 'a'), embedding_index(2, 'b')]] = -1.0
    return u


def alignment(u, u_star):
    """Cosine of the angle between ``u`` and ``u_star``."""
    u = np.asarray(u, dtype=np.float64)
    u_star = np.asarray(u_star, dtype=np.float64)
    norm_u = np.linalg.norm(u)
    norm_star = np.linalg.norm(u_star)
    if norm_u == 0 or norm_star == 0:
        raise ValidationError("Alignment is undefined for a zero vector")
    return float(np.clip(u.dot(u_star) / (norm_u * norm_star), -1.0, 1.0))
