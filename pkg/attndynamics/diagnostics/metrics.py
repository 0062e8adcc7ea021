import numpy as np
import pandas as pd

from attndynamics.exceptions import ArtifactIOError, TrajectoryError
from attndynamics.gradients.loss import logistic_loss
from attndynamics.maxmargin.pooling import alignment
from attndynamics.model.transformer import attention_weights, token_score

METRIC_COLUMNS = ['t', 'loss', 'loss_cot', 'loss_reg', 'ts1', 'ts2', 'ts3', 'u_norm',
                  'w_drift', 'phi1_pos', 'phi1_neg', 'phi_l0', 'align']


class MetricRecord(object):
    """Metrics of one snapshot. Fields a task does not define are ``None``."""

    def __init__(self, t, loss, loss_cot=None, loss_reg=None, ts1=None, ts2=None,
                 ts3=None, u_norm=None, w_drift=None, phi1_pos=None, phi1_neg=None,
                 phi_l0=None, align=None):
        self.t = int(t)
        self.loss = loss
        self.loss_cot = loss_cot
        self.loss_reg = loss_reg
        self.ts1 = ts1
        self.ts2 = ts2
        self.ts3 = ts3
        self.u_norm = u_norm
        self.w_drift = w_drift
        self.phi1_pos = phi1_pos
        self.phi1_neg = phi1_neg
        self.phi_l0 = phi_l0
        self.align = align

    def to_dictionary(self):
        return {column: getattr(self, column) for column in METRIC_COLUMNS}

    @classmethod
    def from_dictionary(cls, arguments):
        values = {}
        for column in METRIC_COLUMNS:
            value = arguments.get(column)
            if value is not None and pd.isnull(value):
                value = None
            values[column] = value
        return cls(**values)

    def __eq__(self, other):
        if not isinstance(other, MetricRecord):
            return False
        return self.to_dictionary() == other.to_dictionary()

    def __repr__(self):
        return "<MetricRecord: t=%d, loss=%r>" % (self.t, self.loss)


def canonical_length(dataset):
    """Length of the canonical a^L / b a^(L-1) sequences: 3 for even pairs, L_0 + 1 for parity."""
    if dataset.task == 'parity_cot':
        return min(dataset.l0 + 1, dataset.max_length)
    return min(3, dataset.max_length)


def record(params, step, dataset, u_star=None, reference_W=None, loss=None):
    """Collect the metrics of one snapshot.

    Args:
        params (ModelParams): Parameters at ``step``.
        step (int): Training step.
        dataset (TaskDataset): Training set, used for the loss and the task.
        u_star (np.ndarray, optional): Max-margin direction for ``align``.
        reference_W (np.ndarray, optional): ``W`` at the end of Phase 1, for
            ``w_drift``.
        loss (LossBreakdown, optional): Precomputed loss at ``params``.

    Returns:
        MetricRecord
    """
    if loss is None:
        loss = logistic_loss(params, dataset)
    scores = [token_score(params, position, 'a') if 2 * position <= params.d else None
              for position in (1, 2, 3)]

    L = canonical_length(dataset)
    phi_pos = attention_weights(params, 'a' * L)
    phi_neg = attention_weights(params, 'b' + 'a' * (L - 1))
    phi_l0 = None
    if dataset.task == 'parity_cot' and dataset.l0 + 1 <= dataset.max_length:
        # position l0 = L - L_0 + 1 = 2 on the length-(L_0 + 1) sequence
        phi = attention_weights(params, 'ab' + 'a' * (dataset.l0 - 1))
        phi_l0 = float(phi[1])

    w_drift = None
    if reference_W is not None:
        w_drift = float(np.linalg.norm(params.W - reference_W))
    align = None
    if u_star is not None and np.any(params.u != 0):
        align = alignment(params.u, u_star)

    return MetricRecord(step, loss.total, loss.cot_component, loss.reg_component,
                        scores[0], scores[1], scores[2], float(np.linalg.norm(params.u)),
                        w_drift, float(phi_pos[0]), float(phi_neg[0]), phi_l0, align)


def metrics_frame(records):
    return pd.DataFrame([r.to_dictionary() for r in records], columns=METRIC_COLUMNS)


def export_csv(trajectory, path):
    """Write the snapshot metrics of ``trajectory`` to ``path`` as CSV.

    Columns follow ``METRIC_COLUMNS``; undefined values are empty cells and
    floats are written in shortest round-trip form.
    """
    records = getattr(trajectory, 'records', trajectory)
    frame = metrics_frame(records)
    frame['t'] = frame['t'].astype(np.int64)
    try:
        frame.to_csv(path, index=False, na_rep='')
    except OSError as e:
        raise ArtifactIOError(path, e.strerror or str(e))


def read_metrics_csv(path):
    """Load records written by :func:`export_csv`."""
    try:
        frame = pd.read_csv(path, float_precision='round_trip')
    except OSError as e:
        raise ArtifactIOError(path, e.strerror or str(e))
    missing = [c for c in METRIC_COLUMNS if c not in frame.columns]
    if missing:
        raise TrajectoryError("%s lacks columns %s" % (path, missing))
    records = []
    for row in frame.to_dict(orient='records'):
        for column in METRIC_COLUMNS[1:]:
            if not pd.isnull(row[column]):
                row[column] = float(row[column])
        records.append(MetricRecord.from_dictionary(row))
    return records
