import itertools

import numpy as np

from attndynamics.config_init import config
from attndynamics.exceptions import ValidationError

TOKENS = ('a', 'b')


def flip(token):
    """Return the other token of the alphabet.

    >>> flip('a')
    'b'
    >>> flip(flip('b'))
    'b'
    """
    if token not in TOKENS:
        raise ValidationError("Unknown token %r, expected one of %s" % (token, TOKENS))
    return 'b' if token == 'a' else 'a'


def label_to_token(label):
    """Map a label to its token: +1 is ``a`` and -1 is ``b``."""
    if label == 1:
        return 'a'
    elif label == -1:
        return 'b'
    raise ValidationError("Label must be +1 or -1, got %r" % (label,))


def token_to_label(token):
    if token not in TOKENS:
        raise ValidationError("Unknown token %r, expected one of %s" % (token, TOKENS))
    return 1 if token == 'a' else -1


class BinarySequence(object):
    """An immutable nonempty string over the alphabet ``{a, b}``.

    Positions are 1-based when addressed with :meth:`token_at`, matching the
    embedding convention; Python indexing (``seq[0]``) stays 0-based.

    Args:
        tokens (str or iterable of str): The tokens, e.g. ``"abba"``.
        max_length (int, optional): Longest sequence accepted. Defaults to
            the ``max_sequence_length`` config value.
    """

    def __init__(self, tokens, max_length=None):
        tokens = ''.join(tokens)
        if max_length is None:
            max_length = config.get("max_sequence_length")
        if len(tokens) == 0:
            raise ValidationError("Sequences must contain at least one token")
        if len(tokens) > max_length:
            raise ValidationError("Sequence length %d exceeds the maximum of %d"
                                  % (len(tokens), max_length))
        bad = set(tokens) - set(TOKENS)
        if bad:
            raise ValidationError("Sequences may only contain 'a' and 'b', found %s"
                                  % sorted(bad))
        self._tokens = tokens

    @property
    def tokens(self):
        return self._tokens

    def token_at(self, position):
        """Token at 1-based ``position``."""
        if position < 1 or position > len(self):
            raise ValidationError("Position %d outside 1..%d" % (position, len(self)))
        return self._tokens[position - 1]

    def first(self):
        return self._tokens[0]

    def last(self):
        return self._tokens[-1]

    def append(self, token):
        """Return a new sequence with ``token`` added at the end."""
        return BinarySequence(self._tokens + token)

    def drop_first(self):
        return BinarySequence(self._tokens[1:])

    def count(self, token):
        return self._tokens.count(token)

    def indices(self):
        """0-based embedding coordinate of every position, in position order."""
        return np.array([embedding_index(i + 1, w) for i, w in enumerate(self._tokens)],
                        dtype=np.intp)

    def __len__(self):
        return len(self._tokens)

    def __iter__(self):
        return iter(self._tokens)

    def __getitem__(self, key):
        return self._tokens[key]

    def __eq__(self, other):
        if isinstance(other, BinarySequence):
            return self._tokens == other._tokens
        if isinstance(other, str):
            return self._tokens == other
        return NotImplemented

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash(self._tokens)

    def __str__(self):
        return self._tokens

    def __repr__(self):
        return "<BinarySequence: %s>" % self._tokens


def as_sequence(seq):
    if isinstance(seq, BinarySequence):
        return seq
    return BinarySequence(seq)


def enumerate_sequences(L):
    """All ``2**L`` sequences of length ``L`` in lexicographic order (a < b).

    >>> [str(s) for s in enumerate_sequences(2)]
    ['aa', 'ab', 'ba', 'bb']
    """
    max_length = config.get("max_sequence_length")
    if not isinstance(L, (int, np.integer)) or L < 1 or L > max_length:
        raise ValidationError("Length must be an integer in 1..%d, got %r" % (max_length, L))
    return [BinarySequence(p) for p in itertools.product(TOKENS, repeat=L)]


def embedding_index(position, token):
    """0-based coordinate of the one-hot embedding of ``token`` at 1-based ``position``.

    ``a`` at position l is e_{2l-1} and ``b`` is e_{2l} in 1-based notation.

    >>> embedding_index(1, 'a'), embedding_index(1, 'b'), embedding_index(3, 'a')
    (0, 1, 4)
    """
    if position < 1:
        raise ValidationError("Positions start at 1, got %r" % (position,))
    if token not in TOKENS:
        raise ValidationError("Unknown token %r, expected one of %s" % (token, TOKENS))
    return 2 * (position - 1) + (1 if token == 'b' else 0)


def embed(seq, d):
    """Embed a sequence as a ``d x L`` matrix of one-hot columns.

    Args:
        seq (BinarySequence or str): Sequence to embed.
        d (int): Embedding dimension, at least twice the sequence length.

    Returns:
        np.ndarray: Column ``l`` is the embedding of the token at position ``l + 1``.
    """
    seq = as_sequence(seq)
    if 2 * len(seq) > d:
        raise ValidationError("Dimension d=%d too small to embed a length-%d sequence "
                              "(need d >= %d)" % (d, len(seq), 2 * len(seq)))
    X = np.zeros((d, len(seq)))
    X[seq.indices(), np.arange(len(seq))] = 1.0
    return X
