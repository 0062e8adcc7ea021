import os

import pytest

from attndynamics import config
from attndynamics.utils import (
    get_attndynamics_root,
    get_installed_versions,
    get_numerical_settings,
    get_presets,
    get_requirements,
    get_sys_info
)


@pytest.fixture
def this_dir():
    return os.path.dirname(os.path.abspath(__file__))


def test_sys_info():
    found_keys = [k for k, _ in get_sys_info()]
    assert found_keys == ["python", "python-bits", "platform", "machine",
                          "byteorder", "float-epsilon"]
    assert dict(get_sys_info())["float-epsilon"] == 2.0 ** -52


def test_requirements_are_installed():
    requirements = get_requirements()
    assert set(["numpy", "scipy", "pandas", "click", "numba"]) <= \
        set(r.lower() for r in requirements)
    versions = get_installed_versions(requirements)
    assert list(versions) == requirements
    assert all(v is not None for v in versions.values())


def test_missing_package_has_no_version():
    versions = get_installed_versions(["numpy", "attndynamics-no-such-package"])
    assert versions["numpy"] is not None
    assert versions["attndynamics-no-such-package"] is None


def test_presets():
    assert get_presets() == ["paper_even_pairs", "paper_parity"]


def test_numerical_settings_follow_config():
    settings = dict(get_numerical_settings())
    assert settings["margin_tolerance"] == config.get("margin_tolerance")
    assert settings["divergence_threshold"] == 1e9


def test_get_attndynamics_root(this_dir):
    root = os.path.abspath(os.path.join(this_dir, '..', ".."))
    assert get_attndynamics_root() == root
