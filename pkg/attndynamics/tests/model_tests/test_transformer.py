import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from attndynamics.exceptions import ValidationError
from attndynamics.model import (
    ModelParams,
    attend,
    attention_score,
    attention_weights,
    batch_attention,
    forward,
    predict,
    sign,
    softmax_lipschitz_gap,
    token_score
)
from attndynamics.sequences import embed, embedding_index, enumerate_sequences


@pytest.fixture
def random_params():
    rng = np.random.RandomState(0)
    return ModelParams(rng.normal(size=12), rng.normal(size=(12, 12)), 2.0)


def test_zero_attention_is_uniform():
    params = ModelParams.zeros(12, 2.0)
    for L in range(1, 7):
        np.testing.assert_allclose(attention_weights(params, 'a' * L), np.full(L, 1.0 / L))
    np.testing.assert_array_equal(attention_weights(params, 'b'), [1.0])


def test_attention_score_gap():
    params = ModelParams.zeros(4, 2.0)
    W = params.W.copy()
    # raw score of the first token exceeds the second by 2
    W[embedding_index(1, 'a'), embedding_index(2, 'b')] = 2.0
    params = params.replace(W=W)
    phi = attention_weights(params, 'ab')
    assert phi[0] == pytest.approx(np.e / (np.e + 1), abs=1e-15)


def test_attention_output_invariants(random_params):
    for L in range(1, 7):
        for seq in enumerate_sequences(L):
            out = attend(random_params, embed(seq, 12))
            assert np.all(out.weights > 0)
            assert abs(out.weights.sum() - 1.0) <= 1e-12
            assert abs(out.logit - random_params.u.dot(out.pooled)) <= 1e-12


def test_forward_is_weighted_token_scores(random_params):
    for seq in enumerate_sequences(5):
        phi = attention_weights(random_params, seq)
        scores = [token_score(random_params, l + 1, w) for l, w in enumerate(seq)]
        assert forward(random_params, seq) == pytest.approx(np.dot(phi, scores), abs=1e-12)
        # the string path and the embedded path agree
        assert forward(random_params, embed(seq, 12)) == pytest.approx(
            forward(random_params, seq), abs=1e-12)


def test_forward_zero_linear_layer():
    params = ModelParams(np.zeros(12), np.ones((12, 12)), 2.0)
    for seq in enumerate_sequences(4):
        assert forward(params, seq) == 0.0
        assert predict(params, seq) == 1


def test_forward_after_first_step_values():
    eta = 0.1
    u = np.zeros(12)
    u[[embedding_index(1, 'a'), embedding_index(1, 'b')]] = eta / 4
    params = ModelParams(u, np.zeros((12, 12)), 2.0)
    for L in range(1, 7):
        assert forward(params, 'b' + 'a' * (L - 1)) == pytest.approx(eta / (4 * L), abs=1e-15)


def test_sign_tie_break():
    assert sign(0.0) == 1
    assert sign(-1e-300) == -1
    assert sign(3.0) == 1


def test_batch_attention_matches_single(random_params):
    sequences = enumerate_sequences(4)
    indices = np.array([s.indices() for s in sequences])
    phi, scores, logits = batch_attention(random_params, indices)
    for i, seq in enumerate(sequences):
        out = attend(random_params, seq)
        np.testing.assert_allclose(phi[i], out.weights, atol=1e-14)
        assert logits[i] == pytest.approx(out.logit, abs=1e-12)


def test_score_accessors(random_params):
    assert token_score(random_params, 2, 'b') == random_params.u[3]
    assert attention_score(random_params, 1, 'a', 3, 'b') == random_params.W[0, 5]
    zero = ModelParams.zeros(12, 2.0)
    assert token_score(zero, 1, 'a') == 0.0
    assert attention_score(zero, 2, 'b', 6, 'a') == 0.0
    with pytest.raises(ValidationError):
        token_score(random_params, 7, 'a')
    with pytest.raises(ValidationError):
        attention_score(random_params, 1, 'a', 7, 'a')


def test_sequence_too_long_for_model():
    params = ModelParams.zeros(4, 1.0)
    with pytest.raises(ValidationError):
        forward(params, 'aaa')


scores = st.lists(st.floats(min_value=-50, max_value=50), min_size=1, max_size=8)


@given(scores, st.data(), st.floats(min_value=0.1, max_value=20))
def test_softmax_lipschitz(s, data, lambda_):
    perturbation = data.draw(st.lists(st.floats(min_value=-5, max_value=5),
                                      min_size=len(s), max_size=len(s)))
    s_prime = np.add(s, perturbation)
    gap, bound = softmax_lipschitz_gap(s, s_prime, lambda_)
    assert gap <= bound + 1e-12
