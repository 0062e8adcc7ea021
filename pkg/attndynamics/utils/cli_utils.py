import os
import platform
import struct
import sys
from collections import OrderedDict

import click
import pkg_resources

import attndynamics
from attndynamics.config_init import config

# config values that decide whether two installations reproduce a run
NUMERICAL_SETTINGS = ["margin_tolerance", "max_margin_updates", "divergence_threshold",
                      "symmetry_tolerance", "attention_floor", "loss_guard"]


def get_attndynamics_root():
    return os.path.dirname(attndynamics.__file__)


def get_presets():
    """Names of the shipped run configurations, usable as ``--config`` values."""
    folder = config.get("presets_folder")
    return sorted(os.path.splitext(name)[0] for name in os.listdir(folder)
                  if name.endswith('.json'))


def get_requirements():
    """Project names of the runtime dependencies.

    Read from the installed distribution, or from ``requirements.txt`` next
    to a source checkout.
    """
    try:
        requirements = pkg_resources.get_distribution('attndynamics').requires()
    except pkg_resources.DistributionNotFound:
        path = os.path.join(os.path.dirname(get_attndynamics_root()), 'requirements.txt')
        if not os.path.exists(path):
            return []
        with open(path) as f:
            requirements = list(pkg_resources.parse_requirements(f.read()))
    return [r.project_name for r in requirements]


def get_installed_versions(names):
    """Installed version of each package, ``None`` for missing ones."""
    versions = OrderedDict()
    for name in names:
        try:
            versions[name] = pkg_resources.get_distribution(name).version
        except pkg_resources.DistributionNotFound:
            versions[name] = None
    return versions


def get_sys_info():
    """Interpreter and machine details as ``(name, value)`` pairs.

    Checkpoints are compared byte for byte, so float width and byte order
    are listed with the platform.
    """
    return [
        ("python", platform.python_version()),
        ("python-bits", struct.calcsize("P") * 8),
        ("platform", platform.platform()),
        ("machine", platform.machine()),
        ("byteorder", sys.byteorder),
        ("float-epsilon", sys.float_info.epsilon),
    ]


def get_numerical_settings():
    return [(key, config.get(key)) for key in NUMERICAL_SETTINGS]


def _echo_section(title, pairs):
    click.echo("\n%s\n%s" % (title, "-" * len(title)))
    for k, v in pairs:
        click.echo("%s: %s" % (k, v))


def print_info():
    click.echo("attndynamics version: %s" % attndynamics.__version__)
    click.echo("attndynamics installation directory: %s" % get_attndynamics_root())
    click.echo("presets: %s" % ", ".join(get_presets()))
    _echo_section("NUMERICAL SETTINGS", get_numerical_settings())
    _echo_section("SYSTEM INFO", get_sys_info())
    versions = get_installed_versions(get_requirements())
    _echo_section("INSTALLED VERSIONS",
                  [(k, v) for k, v in versions.items() if v is not None])


def show_info():
    print_info()
