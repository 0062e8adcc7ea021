import numpy as np
from scipy.special import softmax

from attndynamics.exceptions import ValidationError
from attndynamics.sequences.sequence import BinarySequence, embed, embedding_index


class AttentionOutput(object):
    """Result of one attention pass over a sequence.

    Attributes:
        weights (np.ndarray): Attention distribution phi over positions.
        pooled (np.ndarray): ``sum_l x_l phi_l``, a d-vector.
        logit (float): ``<u, pooled>``.
    """

    def __init__(self, weights, pooled, logit):
        self.weights = weights
        self.pooled = pooled
        self.logit = logit

    def __repr__(self):
        return "<AttentionOutput: logit=%r, weights=%s>" % (self.logit, self.weights)


def _as_matrix(params, X):
    if isinstance(X, (BinarySequence, str)):
        return embed(X, params.d)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != params.d:
        raise ValidationError("Embedded sequence must have shape (%d, L), got %s"
                              % (params.d, X.shape))
    return X


def attention_weights(params, X):
    """Softmax of the raw scores ``<x_l, W x_L> / lambda``.

    Args:
        params (ModelParams): Model state.
        X (np.ndarray or BinarySequence): Embedded ``d x L`` sequence, or a
            sequence to embed at the model's dimension.

    Returns:
        np.ndarray: Length-L probability vector.
    """
    X = _as_matrix(params, X)
    raw = X.T.dot(params.W.dot(X[:, -1])) / params.lambda_
    return softmax(raw)


def attend(params, X):
    X = _as_matrix(params, X)
    phi = attention_weights(params, X)
    pooled = X.dot(phi)
    return AttentionOutput(phi, pooled, float(params.u.dot(pooled)))


def batch_attention(params, indices):
    """Vectorized attention over same-length sequences given by embedding indices.

    One-hot embeddings turn every bilinear form into a lookup, so raw scores
    are ``W[idx_l, idx_L]`` and token scores are ``u[idx_l]``.

    Args:
        params (ModelParams): Model state.
        indices (np.ndarray): ``(N, L)`` embedding coordinates.

    Returns:
        tuple(np.ndarray, np.ndarray, np.ndarray): attention weights ``(N, L)``,
            token scores ``(N, L)`` and logits ``(N,)``.
    """
    indices = np.asarray(indices, dtype=np.intp)
    if indices.max() >= params.d:
        raise ValidationError("Sequences of length %d do not embed at d=%d"
                              % (indices.shape[1], params.d))
    raw = params.W[indices, indices[:, -1:]] / params.lambda_
    phi = softmax(raw, axis=1)
    scores = params.u[indices]
    logits = np.sum(phi * scores, axis=1)
    return phi, scores, logits


def forward(params, X):
    """Transformer output ``T(X) = <u, sum_l x_l phi_l>``."""
    if isinstance(X, (BinarySequence, str)):
        indices = BinarySequence(X).indices() if isinstance(X, str) else X.indices()
        _, _, logits = batch_attention(params, indices[np.newaxis, :])
        return float(logits[0])
    return attend(params, X).logit


def sign(value):
    """Sign with ``sign(0) = +1``."""
    return 1 if value >= 0 else -1


def predict(params, X):
    return sign(forward(params, X))


def token_score(params, position, token):
    """``<u, E_l^w>`` for 1-based position ``l`` and token ``w``."""
    index = embedding_index(position, token)
    if index >= params.d:
        raise ValidationError("Position %d does not embed at d=%d" % (position, params.d))
    return float(params.u[index])


def attention_score(params, position, token, query_position, query_token):
    """Raw bilinear form ``<E_l^w, W E_L^w'>``."""
    key = embedding_index(position, token)
    query = embedding_index(query_position, query_token)
    if max(key, query) >= params.d:
        raise ValidationError("Positions %d/%d do not embed at d=%d"
                              % (position, query_position, params.d))
    return float(params.W[key, query])


def softmax_lipschitz_gap(s, s_prime, lambda_):
    """Return ``(|phi(s/lambda) - phi(s'/lambda)|, |s - s'| / lambda)``.

    Softmax is 1-Lipschitz in the Euclidean norm, so the first value never
    exceeds the second.
    """
    s = np.asarray(s, dtype=np.float64)
    s_prime = np.asarray(s_prime, dtype=np.float64)
    gap = np.linalg.norm(softmax(s / lambda_) - softmax(s_prime / lambda_))
    return float(gap), float(np.linalg.norm(s - s_prime) / lambda_)
