# flake8: noqa
from .api import *
