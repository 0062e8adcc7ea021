from collections import OrderedDict

import numpy as np
import pandas as pd

from attndynamics.exceptions import ArtifactIOError, ValidationError
from attndynamics.sequences.labels import cot_step_label, even_pairs_label
from attndynamics.sequences.sequence import as_sequence, enumerate_sequences

TASK_TAGS = ('even_pairs', 'cot_reg', 'cot_step')

CSV_COLUMNS = ['length', 'sequence', 'label', 'weight', 'task_tag']


def even_pairs_dimension(l_max):
    return 2 * l_max


def parity_cot_dimension(l0):
    # CoT sequences reach length 2 * l0 - 1 and every position must embed
    return 2 * (2 * l0 - 1)


class LabeledExample(object):
    def __init__(self, sequence, label, weight, task_tag):
        if label not in (1, -1):
            raise ValidationError("Labels must be +1 or -1, got %r" % (label,))
        if not weight > 0:
            raise ValidationError("Example weights must be positive, got %r" % (weight,))
        if task_tag not in TASK_TAGS:
            raise ValidationError("Unknown task tag %r, expected one of %s"
                                  % (task_tag, TASK_TAGS))
        self.sequence = as_sequence(sequence)
        self.label = int(label)
        self.weight = float(weight)
        self.task_tag = task_tag

    @property
    def length(self):
        return len(self.sequence)

    def __eq__(self, other):
        if not isinstance(other, LabeledExample):
            return False
        return (self.sequence == other.sequence and self.label == other.label and
                self.weight == other.weight and self.task_tag == other.task_tag)

    def __repr__(self):
        return "<LabeledExample: %s y=%+d w=%r %s>" % (self.sequence, self.label,
                                                        self.weight, self.task_tag)


class LengthGroup(object):
    """All examples of one length, packed as arrays for vectorized evaluation.

    Attributes:
        length (int): Sequence length L of the group.
        indices (np.ndarray): ``(N, L)`` embedding coordinates per position.
        labels (np.ndarray): ``(N,)`` labels as floats.
        weights (np.ndarray): ``(N,)`` per-example weights.
        task_tag (str): Tag shared by the group.
        offset (int): Position of the group's first example in the dataset.
    """

    def __init__(self, length, examples, offset):
        tags = set(e.task_tag for e in examples)
        if len(tags) != 1:
            raise ValidationError("Length %d mixes task tags %s" % (length, sorted(tags)))
        self.length = length
        self.task_tag = tags.pop()
        self.offset = offset
        self.indices = np.array([e.sequence.indices() for e in examples], dtype=np.intp)
        self.labels = np.array([e.label for e in examples], dtype=float)
        self.weights = np.array([e.weight for e in examples], dtype=float)

    def __len__(self):
        return len(self.labels)


class TaskDataset(object):
    """A weighted, labeled collection of sequences grouped by length.

    Args:
        examples (list[LabeledExample]): The examples. Groups are formed per
            length in ascending length order; order within a length is kept.
        d (int): Embedding dimension.
        task (str, optional): ``even_pairs`` or ``parity_cot`` when built by
            one of the builders.
        l_max (int, optional): Longest length for even pairs.
        l0 (int, optional): Base length for parity-CoT.
    """

    def __init__(self, examples, d, task=None, l_max=None, l0=None):
        if len(examples) == 0:
            raise ValidationError("A dataset needs at least one example")
        by_length = OrderedDict()
        for example in sorted(examples, key=lambda e: e.length):
            by_length.setdefault(example.length, []).append(example)
        max_length = max(by_length)
        if 2 * max_length > d:
            raise ValidationError("Dimension d=%d cannot embed sequences of length %d "
                                  "(need d >= %d)" % (d, max_length, 2 * max_length))
        self.d = d
        self.task = task
        self.l_max = l_max
        self.l0 = l0
        self.examples = [e for group in by_length.values() for e in group]
        self.groups = []
        offset = 0
        for length, group in by_length.items():
            self.groups.append(LengthGroup(length, group, offset))
            offset += len(group)

    @property
    def lengths(self):
        return [g.length for g in self.groups]

    @property
    def max_length(self):
        return self.groups[-1].length

    def group(self, length):
        for g in self.groups:
            if g.length == length:
                return g
        raise ValidationError("No examples of length %d in dataset" % length)

    def subset(self, lengths=None, predicate=None):
        """Restrict to some lengths and/or examples, reweighting each length to 1/|I_L|."""
        kept = [e for e in self.examples
                if (lengths is None or e.length in lengths) and
                (predicate is None or predicate(e))]
        counts = {}
        for e in kept:
            counts[e.length] = counts.get(e.length, 0) + 1
        reweighted = [LabeledExample(e.sequence, e.label, 1.0 / counts[e.length], e.task_tag)
                      for e in kept]
        return TaskDataset(reweighted, self.d, task=self.task, l_max=self.l_max, l0=self.l0)

    def to_dataframe(self):
        return pd.DataFrame({
            'length': [e.length for e in self.examples],
            'sequence': [str(e.sequence) for e in self.examples],
            'label': [e.label for e in self.examples],
            'weight': [e.weight for e in self.examples],
            'task_tag': [e.task_tag for e in self.examples],
        }, columns=CSV_COLUMNS)

    def write_csv(self, path):
        try:
            self.to_dataframe().to_csv(path, index=False)
        except OSError as e:
            raise ArtifactIOError(path, e.strerror or str(e))

    def __len__(self):
        return len(self.examples)

    def __iter__(self):
        return iter(self.examples)

    def __eq__(self, other):
        if not isinstance(other, TaskDataset):
            return False
        return (self.d == other.d and self.task == other.task and
                self.examples == other.examples)

    def __repr__(self):
        return "<TaskDataset: task=%s, d=%d, %d examples, lengths %s>" % (
            self.task, self.d, len(self), self.lengths)


def build_even_pairs_dataset(L_max, d=None):
    """Every sequence of lengths 1..L_max with its even-pairs label and weight 1/2^L.

    Args:
        L_max (int): Longest sequence length.
        d (int, optional): Embedding dimension. Defaults to ``2 * L_max``.
    """
    if d is None:
        d = even_pairs_dimension(L_max)
    if d < even_pairs_dimension(L_max):
        raise ValidationError("Even pairs with L_max=%d needs d >= %d, got %d"
                              % (L_max, even_pairs_dimension(L_max), d))
    examples = []
    for L in range(1, L_max + 1):
        weight = 1.0 / 2 ** L
        for seq in enumerate_sequences(L):
            examples.append(LabeledExample(seq, even_pairs_label(seq), weight, 'even_pairs'))
    return TaskDataset(examples, d, task='even_pairs', l_max=L_max)


def build_parity_cot_dataset(L_0, d=None):
    """Parity-CoT training set over lengths 1..2 L_0 - 1.

    Lengths below L_0 carry even-pairs labels (tag ``cot_reg``); lengths
    L_0..2 L_0 - 1 carry teacher-forced CoT step labels (tag ``cot_step``).

    Args:
        L_0 (int): Length of the parity inputs, at least 2.
        d (int, optional): Embedding dimension. Defaults to ``2 * (2 L_0 - 1)``.
    """
    if L_0 < 2:
        raise ValidationError("L_0 must be at least 2, got %r" % (L_0,))
    if d is None:
        d = parity_cot_dimension(L_0)
    if d < parity_cot_dimension(L_0):
        raise ValidationError("Parity-CoT with L_0=%d needs d >= %d, got %d"
                              % (L_0, parity_cot_dimension(L_0), d))
    examples = []
    for L in range(1, 2 * L_0):
        weight = 1.0 / 2 ** L
        for seq in enumerate_sequences(L):
            if L < L_0:
                examples.append(LabeledExample(seq, even_pairs_label(seq), weight, 'cot_reg'))
            else:
                examples.append(LabeledExample(seq, cot_step_label(seq, L_0), weight, 'cot_step'))
    return TaskDataset(examples, d, task='parity_cot', l0=L_0)


def build_task_dataset(task, l_max=None, l0=None):
    """Dataset of ``task`` (``even_pairs`` or ``parity_cot``) at its default dimension."""
    if task == 'even_pairs':
        return build_even_pairs_dataset(l_max)
    elif task == 'parity_cot':
        return build_parity_cot_dataset(l0)
    raise ValidationError("Unknown task %r" % (task,))
