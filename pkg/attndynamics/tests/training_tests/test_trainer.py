import os

import numpy as np
import pytest

from attndynamics import config as global_config
from attndynamics.exceptions import DivergenceError, ValidationError
from attndynamics.gradients import logistic_loss
from attndynamics.model import forward
from attndynamics.sequences import embedding_index
from attndynamics.tests.testing_utils import short_config
from attndynamics.training import (
    accuracy,
    attention_learning_rate,
    build_dataset,
    init_params,
    parity_loss_components,
    snapshot_steps,
    step,
    train
)


def test_init_params(even_pairs_config, parity_config):
    params = init_params(even_pairs_config)
    assert params.d == 12
    assert not params.u.any() and not params.W.any()
    assert init_params(parity_config).d == 14
    assert forward(params, 'abba') == 0.0


def test_first_step_exact_values(even_pairs_config, even_pairs_dataset):
    params = step(init_params(even_pairs_config), even_pairs_dataset, even_pairs_config, 0)
    first = [embedding_index(1, 'a'), embedding_index(1, 'b')]
    assert params.u[first[0]] == 0.025
    assert params.u[first[1]] == 0.025
    assert np.count_nonzero(params.u) == 2
    assert not params.W.any()

    second = step(params, even_pairs_dataset, even_pairs_config, 1)
    third = step(second, even_pairs_dataset, even_pairs_config, 2)
    assert third.W.any()


def test_learning_rate_schedule(even_pairs_config):
    assert attention_learning_rate(even_pairs_config, 0) == pytest.approx(0.2)
    assert attention_learning_rate(even_pairs_config, 99) == pytest.approx(0.2)
    assert attention_learning_rate(even_pairs_config, 100) == 0.1
    vanilla = even_pairs_config.copy(schedule='vanilla')
    assert attention_learning_rate(vanilla, 0) == 0.1


def test_step_applies_lambda_to_W_only(even_pairs_config, even_pairs_dataset, even_pairs_run):
    params = even_pairs_run.checkpoint_at(50)
    two_phase = step(params, even_pairs_dataset, even_pairs_config, 50)
    vanilla = step(params, even_pairs_dataset, even_pairs_config.copy(schedule='vanilla'), 50)
    np.testing.assert_array_equal(two_phase.u, vanilla.u)
    np.testing.assert_allclose(two_phase.W - params.W, 2.0 * (vanilla.W - params.W),
                               rtol=1e-8, atol=1e-15)


def test_step_rejects_negative_index(even_pairs_config, even_pairs_dataset):
    with pytest.raises(ValidationError):
        step(init_params(even_pairs_config), even_pairs_dataset, even_pairs_config, -1)


def test_snapshot_steps():
    config = short_config(t0=25, total_steps=55, snapshot_every=10)
    assert sorted(snapshot_steps(config)) == [0, 10, 20, 25, 30, 40, 50, 55]


def test_training_is_deterministic():
    config = short_config()
    first = train(config)
    second = train(config)
    assert first.steps == second.steps
    for t in first.checkpoints:
        assert first.checkpoint_at(t) == second.checkpoint_at(t)


def _artifact_bytes(out_dir):
    contents = {}
    for name in sorted(os.listdir(out_dir)):
        if name in ('metrics.csv', 'max_margin.json') or name.startswith('ckpt_'):
            with open(os.path.join(out_dir, name), 'rb') as f:
                contents[name] = f.read()
    return contents


def test_training_artifacts_are_byte_identical(parity_config, tmpdir):
    config = parity_config.copy(total_steps=300, snapshot_every=50)
    first_dir = str(tmpdir.join('first'))
    second_dir = str(tmpdir.join('second'))
    train(config, out_dir=first_dir)
    train(config, out_dir=second_dir)
    first = _artifact_bytes(first_dir)
    second = _artifact_bytes(second_dir)
    assert sorted(first) == sorted(second)
    assert set(['metrics.csv', 'max_margin.json', 'ckpt_0.json', 'ckpt_300.json']) <= set(first)
    for name in first:
        assert first[name] == second[name], name


def test_trajectory_shape():
    config = short_config(total_steps=40, t0=10, snapshot_every=10)
    trajectory = train(config)
    assert trajectory.steps == [0, 10, 20, 30, 40]
    assert trajectory.checkpoint_at(0) == init_params(config)
    assert trajectory.record_at(10).w_drift == 0.0
    assert trajectory.record_at(0).w_drift is None
    assert len(trajectory.gradient_bounds) == 5


def test_divergence_guard():
    old = global_config.get("loss_guard")
    global_config.set({"loss_guard": 0.1})
    try:
        with pytest.raises(DivergenceError, match='step 0'):
            train(short_config())
    finally:
        global_config.set({"loss_guard": old})


def test_paper_even_pairs_run(even_pairs_run, even_pairs_dataset):
    assert accuracy(even_pairs_run.final_params(), even_pairs_dataset) == (126, 126)
    losses = [even_pairs_run.record_at(t).loss for t in (0, 100, 5000)]
    assert losses[2] < losses[1] < losses[0]
    assert even_pairs_run.margin_solution is not None


def test_paper_parity_run(parity_run, parity_dataset):
    assert accuracy(parity_run.final_params(), parity_dataset) == (254, 254)
    start = parity_loss_components(parity_run.checkpoint_at(0), parity_dataset)
    end = parity_loss_components(parity_run.final_params(), parity_dataset)
    assert end[0] < start[0] and end[1] < start[1]


def test_parity_loss_components(parity_dataset, even_pairs_dataset, parity_config):
    params = init_params(parity_config)
    cot, reg = parity_loss_components(params, parity_dataset)
    assert cot == pytest.approx(4 * np.log(2), abs=1e-14)
    assert reg == pytest.approx(3 * np.log(2), abs=1e-14)
    assert cot + reg == pytest.approx(logistic_loss(params, parity_dataset).total, abs=1e-12)
    with pytest.raises(ValidationError):
        parity_loss_components(init_params(parity_config.copy(task='even_pairs')),
                               even_pairs_dataset)


def test_vanilla_run_trains(vanilla_run, even_pairs_dataset):
    assert vanilla_run.records[-1].loss < vanilla_run.record_at(100).loss
    correct, total = accuracy(vanilla_run.final_params(), even_pairs_dataset)
    assert correct == total


def test_build_dataset(parity_config):
    assert len(build_dataset(parity_config)) == 254
