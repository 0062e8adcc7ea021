# flake8: noqa
from .train_config import TrainConfig, build_dataset, load_config
from .trainer import (
    accuracy,
    attention_learning_rate,
    init_params,
    parity_loss_components,
    snapshot_steps,
    step,
    train
)
from .trajectory import Trajectory, read_trajectory
from .sweep import run_sweep, sweep_directory
