import pandas as pd

from attndynamics.exceptions import ValidationError
from attndynamics.model.transformer import predict
from attndynamics.sequences.labels import parity_label
from attndynamics.sequences.sequence import as_sequence, label_to_token


class CoTStep(object):
    """One CoT iteration: the model read ``window``, output ``output`` and appended ``token``."""

    def __init__(self, iteration, window, output, token):
        self.iteration = iteration
        self.window = window
        self.output = output
        self.token = token

    def __repr__(self):
        return "<CoTStep %d: %s -> %+d (%s)>" % (self.iteration, self.window,
                                                 self.output, self.token)


class CoTRun(object):
    """Trace of a CoT inference.

    Attributes:
        sequence (BinarySequence): The input.
        mode (str): ``truncated`` or ``autoregressive``.
        steps (list[CoTStep]): Iterations in order.
        final_window (BinarySequence): Sequence after the last iteration.
    """

    def __init__(self, sequence, mode, steps, final_window):
        self.sequence = sequence
        self.mode = mode
        self.steps = steps
        self.final_window = final_window

    @property
    def prediction(self):
        return self.steps[-1].output

    @property
    def generated_tokens(self):
        return [s.token for s in self.steps]

    def __repr__(self):
        return "<CoTRun %s: %s -> %+d>" % (self.mode, self.sequence, self.prediction)


def greedy_token_of(prediction):
    """Token appended for a prediction: +1 is ``a`` and -1 is ``b``.

    >>> greedy_token_of(1), greedy_token_of(-1)
    ('a', 'b')
    """
    return label_to_token(prediction)


def truncated_cot_infer(comparator, seq):
    """Parity by repeatedly comparing first and last tokens of a sliding window.

    Each iteration appends the token of the comparison and drops the first
    token, so the window keeps length L and is re-embedded at positions 1..L.
    After L - 1 iterations the last output is the parity.

    Args:
        comparator (Comparator): First-equals-last decision.
        seq (BinarySequence or str): Input of length at least 2.

    Returns:
        CoTRun
    """
    seq = as_sequence(seq)
    L = len(seq)
    if L < 2:
        raise ValidationError("Truncated CoT needs a sequence of length >= 2, got %d" % L)
    if comparator.max_length is not None and L > comparator.max_length:
        raise ValidationError("Window length %d exceeds the comparator's capacity of %d"
                              % (L, comparator.max_length))
    window = seq
    steps = []
    for t in range(1, L):
        output = comparator(window)
        token = greedy_token_of(output)
        steps.append(CoTStep(t, window, output, token))
        window = window.drop_first().append(token)
    return CoTRun(seq, 'truncated', steps, window)


def autoregressive_cot_infer(params, seq, L_0=None):
    """Parity with a CoT-trained model that appends its prediction each step.

    Args:
        params (ModelParams): Parameters trained on the parity-CoT dataset.
        seq (BinarySequence or str): Input of length ``L_0``.
        L_0 (int, optional): Expected input length. Defaults to ``len(seq)``.

    Returns:
        CoTRun
    """
    seq = as_sequence(seq)
    if L_0 is None:
        L_0 = len(seq)
    if len(seq) != L_0:
        raise ValidationError("Autoregressive CoT expects length L_0=%d, got %d"
                              % (L_0, len(seq)))
    if L_0 < 2:
        raise ValidationError("Autoregressive CoT needs L_0 >= 2, got %d" % L_0)
    if params.d < 2 * (2 * L_0 - 1):
        raise ValidationError("Model dimension d=%d cannot embed CoT sequences of length %d"
                              % (params.d, 2 * L_0 - 1))
    current = seq
    steps = []
    for t in range(1, L_0):
        output = predict(params, current)
        token = greedy_token_of(output)
        steps.append(CoTStep(t, current, output, token))
        current = current.append(token)
    return CoTRun(seq, 'autoregressive', steps, current)


def automaton_parity(seq):
    """Parity from the two-state automaton whose state flips on every ``b``.

    >>> automaton_parity('abb'), automaton_parity('ab')
    (1, -1)
    """
    state = 'a'
    for token in as_sequence(seq):
        # the next state is a when the current state and token agree
        state = 'a' if state == token else 'b'
    return 1 if state == 'a' else -1


def parity_results_frame(runs):
    """Tabulate CoT runs against the true parity.

    Returns:
        pd.DataFrame: Columns ``sequence``, ``prediction``, ``truth``, ``correct``.
    """
    rows = []
    for run in runs:
        truth = parity_label(run.sequence)
        rows.append({'sequence': str(run.sequence), 'prediction': run.prediction,
                     'truth': truth, 'correct': run.prediction == truth})
    return pd.DataFrame(rows, columns=['sequence', 'prediction', 'truth', 'correct'])
