# flake8: noqa
from .sequence import (
    TOKENS,
    BinarySequence,
    as_sequence,
    embed,
    embedding_index,
    enumerate_sequences,
    flip,
    label_to_token,
    token_to_label
)
from .labels import (
    CoTTrace,
    cot_step_label,
    cot_trace,
    even_pairs_label,
    parity_label,
    substring_pattern_count
)
from .dataset import (
    TASK_TAGS,
    LabeledExample,
    LengthGroup,
    TaskDataset,
    build_even_pairs_dataset,
    build_parity_cot_dataset,
    build_task_dataset,
    even_pairs_dimension,
    parity_cot_dimension
)
