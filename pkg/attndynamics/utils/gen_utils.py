import json
import sys

import psutil
from tqdm import tqdm

from attndynamics.exceptions import ArtifactIOError


def session_type():
    if 'IPython' not in sys.modules:
        # IPython hasn't been imported, definitely not
        return "python"
    from IPython import get_ipython
    # check for `kernel` attribute on the IPython instance
    if getattr(get_ipython(), 'kernel', None) is not None:
        return "kernel"
    return "ipython"


def make_tqdm_iterator(**kwargs):
    options = {
        "file": sys.stdout,
        "leave": True
    }
    options.update(kwargs)

    if session_type() == 'kernel':
        from tqdm import tqdm_notebook
        return tqdm_notebook(**options)
    return tqdm(**options)


def n_jobs_to_workers(n_jobs):
    try:
        cpus = len(psutil.Process().cpu_affinity())
    except AttributeError:
        cpus = psutil.cpu_count()

    # same convention as joblib: -1 means every cpu, -2 all but one, ...
    if n_jobs < 0:
        workers = max(cpus + 1 + n_jobs, 1)
    else:
        workers = min(n_jobs, cpus)

    assert workers > 0, "Need at least one worker"
    return workers


def dump_json(obj, path):
    """Write ``obj`` as JSON, surfacing I/O failures with the path attached.

    Floats are written with Python's shortest round-trip repr, so reading
    the file back reproduces them bit for bit.
    """
    try:
        with open(path, 'w') as f:
            json.dump(obj, f, indent=2)
    except OSError as e:
        raise ArtifactIOError(path, e.strerror or str(e))


def load_json(path):
    try:
        with open(path, 'r') as f:
            return json.load(f)
    except OSError as e:
        raise ArtifactIOError(path, e.strerror or str(e))
    except ValueError as e:
        raise ArtifactIOError(path, "invalid JSON (%s)" % e)
