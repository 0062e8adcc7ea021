# flake8: noqa
from .pooling import (
    PooledDataset,
    alignment,
    canonical_even_pairs_separator,
    is_separable_by,
    pool_dataset
)
from .solver import MarginSolution, kkt_residuals, solve_max_margin
from .oracle import support_subset_oracle
