# flake8: noqa
from .cli_utils import (
    get_attndynamics_root,
    get_installed_versions,
    get_numerical_settings,
    get_presets,
    get_requirements,
    get_sys_info,
    show_info
)
from .gen_utils import (
    dump_json,
    load_json,
    make_tqdm_iterator,
    n_jobs_to_workers
)
