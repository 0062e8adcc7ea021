import pytest

from attndynamics.sequences.dataset import (
    build_even_pairs_dataset,
    build_parity_cot_dataset
)
from attndynamics.training.train_config import load_config
from attndynamics.training.trainer import train


@pytest.fixture(scope='session')
def even_pairs_config():
    return load_config('paper_even_pairs.json')


@pytest.fixture(scope='session')
def parity_config():
    return load_config('paper_parity.json')


@pytest.fixture(scope='session')
def even_pairs_run(even_pairs_config):
    return train(even_pairs_config)


@pytest.fixture(scope='session')
def parity_run(parity_config):
    return train(parity_config)


@pytest.fixture(scope='session')
def vanilla_run(even_pairs_config):
    return train(even_pairs_config.copy(schedule='vanilla'))


@pytest.fixture(scope='session')
def even_pairs_dataset():
    return build_even_pairs_dataset(6)


@pytest.fixture(scope='session')
def parity_dataset():
    return build_parity_cot_dataset(4)


@pytest.fixture(scope='session')
def even_pairs_run_dir(tmpdir_factory, even_pairs_config):
    out_dir = str(tmpdir_factory.mktemp('even_pairs_run'))
    train(even_pairs_config.copy(out_dir=out_dir))
    return out_dir


@pytest.fixture(scope='session')
def even_pairs_lambda10_run(even_pairs_config):
    return train(even_pairs_config.copy(**{'lambda': 10.0}))


@pytest.fixture(scope='session')
def even_pairs_lambda18_run(even_pairs_config):
    return train(even_pairs_config.copy(**{'lambda': 18.0}))
