import numpy as np
import pytest

from attndynamics.exceptions import ArtifactIOError, ValidationError
from attndynamics.model import ModelParams, load_checkpoint, save_checkpoint


def test_params_validation():
    with pytest.raises(ValidationError, match='shape'):
        ModelParams(np.zeros(4), np.zeros((4, 3)), 1.0)
    with pytest.raises(ValidationError, match='positive'):
        ModelParams(np.zeros(4), np.zeros((4, 4)), 0.0)
    with pytest.raises(ValidationError, match='vector'):
        ModelParams(np.zeros((2, 2)), np.zeros((2, 2)), 1.0)


def test_zeros():
    params = ModelParams.zeros(6, 2.0)
    assert params.d == 6
    assert params.max_length == 3
    assert not params.u.any() and not params.W.any()


def test_checkpoint_round_trip_is_bit_exact(tmpdir):
    rng = np.random.RandomState(3)
    params = ModelParams(rng.normal(size=8) / 3.0, rng.normal(size=(8, 8)) * 1e-7, 2.0)
    path = str(tmpdir.join('ckpt_7.json'))
    save_checkpoint(params, path, step=7, task='even_pairs')
    loaded, metadata = load_checkpoint(path)
    assert loaded == params
    assert metadata == {'step': 7, 'task': 'even_pairs'}


def test_checkpoint_layout_is_row_major():
    W = np.arange(4.0).reshape(2, 2)
    data = ModelParams(np.zeros(2), W, 1.0).to_dictionary(step=0, task='even_pairs')
    assert data['W'] == [0.0, 1.0, 2.0, 3.0]
    assert sorted(data) == ['W', 'd', 'lambda', 'step', 'task', 'u']


def test_checkpoint_errors(tmpdir):
    with pytest.raises(ArtifactIOError, match='missing.json'):
        load_checkpoint(str(tmpdir.join('missing.json')))
    with pytest.raises(ValidationError, match='missing keys'):
        ModelParams.from_dictionary({'d': 2, 'u': [0.0, 0.0]})
    with pytest.raises(ValidationError, match='do not match'):
        ModelParams.from_dictionary({'d': 2, 'lambda': 1.0, 'u': [0.0], 'W': [0.0] * 4})
