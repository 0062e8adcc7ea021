from attndynamics.exceptions import ValidationError
from attndynamics.sequences.sequence import as_sequence, label_to_token

EVEN_PAIRS_PATTERNS = ('ab', 'ba')


def substring_pattern_count(seq, patterns):
    """Total number of contiguous, possibly overlapping, occurrences of each pattern.

    >>> substring_pattern_count('aabba', {'ab', 'ba'})
    2
    >>> substring_pattern_count('ababab', {'ab', 'ba'})
    5
    """
    tokens = as_sequence(seq).tokens
    total = 0
    for pattern in patterns:
        width = len(pattern)
        if width == 0:
            continue
        total += sum(1 for i in range(len(tokens) - width + 1)
                     if tokens[i:i + width] == pattern)
    return total


def even_pairs_label(seq):
    """+1 if the sequence holds an even number of ``ab``/``ba`` substrings.

    This is the same as asking whether the first and last tokens match.

    >>> even_pairs_label('aabba'), even_pairs_label('ab')
    (1, -1)
    """
    seq = as_sequence(seq)
    return 1 if seq.first() == seq.last() else -1


def parity_label(seq):
    """+1 if the number of ``b`` tokens is even.

    >>> parity_label('abb'), parity_label('b')
    (1, -1)
    """
    return 1 if as_sequence(seq).count('b') % 2 == 0 else -1


def cot_step_label(seq, L_0):
    """Teacher-forced label of a CoT step.

    For a sequence of length ``L >= L_0`` this compares the token at position
    ``L - L_0 + 1`` with the last token.

    >>> cot_step_label('abb', 3), cot_step_label('abbb', 3)
    (-1, 1)
    """
    seq = as_sequence(seq)
    L = len(seq)
    if L < L_0:
        raise ValidationError("CoT step labels need length >= L_0=%d, got %d" % (L_0, L))
    return 1 if seq.token_at(L - L_0 + 1) == seq.last() else -1


class CoTTrace(object):
    """The ground-truth chain of thought for a base sequence.

    Args:
        base (BinarySequence): The input X of length L_0.
        intermediates (list[BinarySequence]): X^1 .. X^{L_0 - 1}, X^1 being X.
        appended (list[str]): Tokens w_{L_0 + 1} .. w_{2 L_0 - 1}.
    """

    def __init__(self, base, intermediates, appended):
        self.base = base
        self.intermediates = intermediates
        self.appended = appended

    @property
    def final_token(self):
        return self.appended[-1]

    @property
    def full_sequence(self):
        return self.intermediates[-1].append(self.final_token)

    @property
    def labels(self):
        return [1 if token == 'a' else -1 for token in self.appended]

    def __repr__(self):
        return "<CoTTrace: %s -> %s>" % (self.base, self.full_sequence)


def cot_trace(seq, L_0=None):
    """Generate the CoT trace of ``seq``, whose final token is its parity.

    Step t appends ``a`` iff the tokens at positions t and L_0 + t - 1 match.

    >>> str(cot_trace('abb').full_sequence)
    'abbba'
    """
    seq = as_sequence(seq)
    if L_0 is None:
        L_0 = len(seq)
    if L_0 < 2 or len(seq) != L_0:
        raise ValidationError("CoT traces need a base sequence of length L_0 >= 2, "
                              "got length %d with L_0=%d" % (len(seq), L_0))
    current = seq
    intermediates = [current]
    appended = []
    for t in range(1, L_0):
        label = 1 if current.token_at(t) == current.token_at(L_0 + t - 1) else -1
        token = label_to_token(label)
        appended.append(token)
        if t < L_0 - 1:
            current = current.append(token)
            intermediates.append(current)
    return CoTTrace(seq, intermediates, appended)
