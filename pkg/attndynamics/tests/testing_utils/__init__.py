# flake8: noqa
from .runs import frozen_trajectory, short_config, synthetic_trajectory
from .pooled import random_separable_pooled
