# flake8: noqa
from .metrics import (
    METRIC_COLUMNS,
    MetricRecord,
    canonical_length,
    export_csv,
    metrics_frame,
    read_metrics_csv,
    record
)
from .report import CheckResult, TheoryReport
from .phase1 import attention_gaps, gradient_bounds_check, phase1_report
from .phase2 import alignment_bound, detect_t2, phase2_report
from .separability import separability_report
from .symmetry import symmetry_report
