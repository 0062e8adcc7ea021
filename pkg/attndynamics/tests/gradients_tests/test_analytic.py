import numpy as np
import pytest

from attndynamics.gradients import (
    compare_gradients,
    fd_gradient,
    grad_u,
    grad_W,
    gradient_norm_bounds,
    gradients,
    loss_and_gradients,
    logistic_loss
)
from attndynamics.model import ModelParams
from attndynamics.sequences import (
    LabeledExample,
    TaskDataset,
    build_even_pairs_dataset,
    embedding_index
)


def synthetic_params(seed, d):
    rng = np.random.RandomState(seed)
    scale = [0.1, 0.5, 1.0, 0.3, 0.8][seed % 5]
    return ModelParams(scale * rng.normal(size=d), scale * rng.normal(size=(d, d)),
                       [2.0, 1.0, 10.0, 1.0, 18.0][seed % 5])


def test_zero_params_grad_u(even_pairs_dataset):
    g = grad_u(ModelParams.zeros(12, 2.0), even_pairs_dataset)
    first = [embedding_index(1, 'a'), embedding_index(1, 'b')]
    np.testing.assert_array_equal(-g[first], [0.25, 0.25])
    assert not np.delete(g, first).any()


@pytest.mark.parametrize("l_max", [2, 3, 6, 8])
def test_zero_params_grad_u_cancels_exactly(l_max):
    dataset = build_even_pairs_dataset(l_max)
    g = grad_u(ModelParams.zeros(dataset.d, 2.0), dataset)
    assert np.count_nonzero(g) == 2
    assert g[embedding_index(1, 'a')] == g[embedding_index(1, 'b')] == -0.25


def test_zero_u_gives_zero_grad_W(even_pairs_dataset):
    rng = np.random.RandomState(1)
    params = ModelParams(np.zeros(12), rng.normal(size=(12, 12)), 2.0)
    assert not grad_W(params, even_pairs_dataset).any()


def test_grad_W_only_touches_last_token_columns():
    dataset = TaskDataset([LabeledExample('abb', -1, 1.0, 'even_pairs')], 6)
    rng = np.random.RandomState(2)
    params = ModelParams(rng.normal(size=6), rng.normal(size=(6, 6)), 2.0)
    g = grad_W(params, dataset)
    nonzero_columns = set(np.nonzero(np.abs(g).sum(axis=0))[0])
    assert nonzero_columns <= {4, 5}
    assert np.abs(g[:, 5]).sum() > 0


def test_loss_and_gradients_agree_with_parts(parity_dataset):
    params = synthetic_params(0, 14)
    loss, grads = loss_and_gradients(params, parity_dataset)
    assert loss.total == logistic_loss(params, parity_dataset).total
    np.testing.assert_array_equal(grads.grad_u, gradients(params, parity_dataset).grad_u)


@pytest.mark.parametrize('seed', range(5))
def test_fd_agreement_synthetic(seed, even_pairs_dataset, parity_dataset):
    for dataset in (even_pairs_dataset, parity_dataset):
        params = synthetic_params(seed, dataset.d)
        summary = compare_gradients(params, dataset)
        assert summary['passed'], summary


def test_fd_agreement_zero_params(even_pairs_dataset, parity_dataset):
    for dataset in (even_pairs_dataset, parity_dataset):
        summary = compare_gradients(ModelParams.zeros(dataset.d, 2.0), dataset)
        assert summary['passed'], summary


def test_fd_agreement_along_runs(even_pairs_run, parity_run, even_pairs_dataset,
                                 parity_dataset):
    for run, dataset in ((even_pairs_run, even_pairs_dataset), (parity_run, parity_dataset)):
        for step in (run.config.t0, run.config.total_steps):
            summary = compare_gradients(run.checkpoint_at(step), dataset)
            assert summary['passed'], (step, summary)


def test_fd_gradient_shapes(even_pairs_dataset):
    grads = fd_gradient(ModelParams.zeros(12, 2.0), even_pairs_dataset)
    assert grads.grad_u.shape == (12,)
    assert grads.grad_W.shape == (12, 12)


def test_fd_step_must_be_positive(even_pairs_dataset):
    with pytest.raises(ValueError):
        fd_gradient(ModelParams.zeros(12, 2.0), even_pairs_dataset, h=0.0)


@pytest.mark.parametrize('seed', range(5))
def test_gradient_norm_bounds(seed, parity_dataset):
    params = synthetic_params(seed, 14)
    bounds = gradient_norm_bounds(params, parity_dataset)
    assert bounds['grad_u_norm'] <= bounds['grad_u_bound']
    assert bounds['grad_W_norm'] <= bounds['grad_W_bound'] * (1 + 1e-12)
    assert bounds['grad_u_bound'] == 7.0


def test_gradient_symmetry_along_run(even_pairs_run, even_pairs_dataset):
    for params in list(even_pairs_run.checkpoints.values())[::50]:
        g = grad_u(params, even_pairs_dataset)
        for position in range(1, 7):
            a = g[embedding_index(position, 'a')]
            b = g[embedding_index(position, 'b')]
            assert abs(a - b) <= 1e-12 * max(1.0, abs(a), abs(b))
