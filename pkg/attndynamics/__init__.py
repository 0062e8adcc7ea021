# flake8: noqa
from .config_init import config
from .sequences.api import *
from .model.api import *
from .gradients.api import *
from .maxmargin.api import *
from .diagnostics.api import *
from .training.api import *
from .cot.api import *
from .utils.cli_utils import show_info
from .version import __version__
