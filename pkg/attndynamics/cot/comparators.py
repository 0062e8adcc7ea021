from attndynamics.config_init import config
from attndynamics.model.transformer import predict
from attndynamics.sequences.sequence import as_sequence


class Comparator(object):
    """Decides whether the first and last tokens of a sequence are equal.

    Subclasses implement :meth:`compare`, returning +1 for equal and -1
    otherwise, and set ``max_length``.
    """
    max_length = None

    def compare(self, seq):
        raise NotImplementedError("Subclass must implement")

    def __call__(self, seq):
        return self.compare(as_sequence(seq))


class IdealComparator(Comparator):
    """Exact first-equals-last oracle."""

    def __init__(self, max_length=None):
        if max_length is None:
            max_length = config.get("max_sequence_length")
        self.max_length = max_length

    def compare(self, seq):
        return 1 if seq.first() == seq.last() else -1

    def __repr__(self):
        return "<IdealComparator>"


class ModelComparator(Comparator):
    """Comparator backed by a trained model's prediction.

    Args:
        params (ModelParams): Typically an even-pairs checkpoint.
    """

    def __init__(self, params):
        self.params = params
        self.max_length = params.max_length

    def compare(self, seq):
        return predict(self.params, seq)

    def __repr__(self):
        return "<ModelComparator: d=%d>" % self.params.d
