import copy
import logging
import os
import sys


def initialize_logging():
    loggers = {}

    # Check for environmental variables
    logger_env_vars = {
        'ATTNDYNAMICS_LOG_LEVEL': 'attndynamics',
        'ATTNDYNAMICS_TRAINING_LOG_LEVEL': 'attndynamics.training',
        'ATTNDYNAMICS_MAXMARGIN_LOG_LEVEL': 'attndynamics.maxmargin'
    }
    for logger_env, logger in logger_env_vars.items():
        log_level = os.environ.get(logger_env, None)
        if log_level is not None:
            loggers[logger] = log_level

    # Set log level to info if not otherwise specified.
    loggers.setdefault('attndynamics', 'info')
    loggers.setdefault('attndynamics.training', 'info')
    loggers.setdefault('attndynamics.maxmargin', 'info')

    fmt = '%(asctime)-15s %(name)s - %(levelname)s    %(message)s'
    out_handler = logging.StreamHandler(sys.stdout)
    err_handler = logging.StreamHandler(sys.stdout)
    out_handler.setFormatter(logging.Formatter(fmt))
    err_handler.setFormatter(logging.Formatter(fmt))
    err_levels = ['WARNING', 'ERROR', 'CRITICAL']

    for name, level in list(loggers.items()):
        LEVEL = getattr(logging, level.upper())
        logger = logging.getLogger(name)
        logger.setLevel(LEVEL)
        for _handler in list(logger.handlers):
            logger.removeHandler(_handler)

        if level.upper() in err_levels:
            logger.addHandler(err_handler)
        else:
            logger.addHandler(out_handler)
        logger.propagate = False


def set_quiet():
    """Raise every attndynamics logger to WARNING (used by ``--quiet``)."""
    for name in ['attndynamics', 'attndynamics.training', 'attndynamics.maxmargin']:
        logging.getLogger(name).setLevel(logging.WARNING)


initialize_logging()


class Config():
    def __init__(self):
        self._data = {}
        self.set_to_default()

    def set_to_default(self):
        PWD = os.path.dirname(__file__)
        presets_folder = os.path.join(PWD, "presets")
        self._data = {
            "presets_folder": presets_folder,
            "max_sequence_length": 20,
            "symmetry_tolerance": 1e-12,
            "fd_step": 1e-5,
            "fd_tolerance": 1e-6,
            "fd_abs_floor": 1e-10,
            "margin_tolerance": 1e-8,
            "max_margin_updates": 10 ** 7,
            "divergence_threshold": 1e9,
            "attention_floor": 1e-10,
            "loss_guard": 1e6,
        }

    def get(self, key):
        return copy.deepcopy(self._data[key])

    def get_all(self):
        return copy.deepcopy(self._data)

    def set(self, values):
        self._data.update(values)


config = Config()
