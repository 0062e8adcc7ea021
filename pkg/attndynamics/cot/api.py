# flake8: noqa
from .comparators import Comparator, IdealComparator, ModelComparator
from .inference import (
    CoTRun,
    CoTStep,
    automaton_parity,
    autoregressive_cot_infer,
    greedy_token_of,
    parity_results_frame,
    truncated_cot_infer
)
