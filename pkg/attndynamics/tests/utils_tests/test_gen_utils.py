import psutil
import pytest

from attndynamics.exceptions import ArtifactIOError
from attndynamics.utils import dump_json, load_json, n_jobs_to_workers


def test_n_jobs_to_workers():
    try:
        cpus = len(psutil.Process().cpu_affinity())
    except AttributeError:
        cpus = psutil.cpu_count()

    assert n_jobs_to_workers(1) == 1
    assert n_jobs_to_workers(-1) == cpus
    assert n_jobs_to_workers(cpus + 1) == cpus
    assert n_jobs_to_workers(-cpus - 5) == 1


def test_json_round_trip(tmpdir):
    path = str(tmpdir.join('data.json'))
    data = {'margin': 0.1 + 0.2, 'support_indices': [0, 3], 'note': None}
    dump_json(data, path)
    assert load_json(path) == data


def test_json_errors(tmpdir):
    with pytest.raises(ArtifactIOError, match='missing.json'):
        load_json(str(tmpdir.join('missing.json')))
    bad = tmpdir.join('bad.json')
    bad.write('{"margin": ')
    with pytest.raises(ArtifactIOError, match='invalid JSON'):
        load_json(str(bad))
    with pytest.raises(ArtifactIOError):
        dump_json({}, str(tmpdir.join('no_such_dir', 'data.json')))
