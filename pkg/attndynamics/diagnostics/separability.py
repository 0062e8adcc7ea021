import logging

from attndynamics.config_init import config as global_config
from attndynamics.diagnostics.report import FAIL, PASS, CheckResult, TheoryReport
from attndynamics.exceptions import ConvergenceError, NotSeparableError
from attndynamics.maxmargin.pooling import (
    canonical_even_pairs_separator,
    is_separable_by,
    pool_dataset
)
from attndynamics.maxmargin.solver import solve_max_margin

logger = logging.getLogger('attndynamics.maxmargin')


def _witness_point(u, pooled):
    margins = pooled.labels * pooled.points.dot(u)
    n = int(margins.argmin())
    witness = {'index': n, 'label': float(pooled.labels[n]), 'margin': float(margins[n])}
    if pooled.sequences is not None:
        witness['sequence'] = str(pooled.sequences[n])
    return witness


def separability_report(checkpoint, dataset, step=None, max_updates=None):
    """Separability of the attention-pooled dataset at the end of Phase 1.

    For even pairs the canonical direction ``E_1^a + E_1^b - E_2^a - E_2^b``
    must separate the pooled points strictly. For every task the max-margin
    solve must succeed and be KKT-certified. Solver failures are reported as
    failing checks.

    Args:
        checkpoint (ModelParams): Parameters at ``t0``.
        dataset (TaskDataset): Training set of the run.
        step (int, optional): Step of ``checkpoint``, for the report metadata.
        max_updates (int, optional): Coordinate update cap for the solver.

    Returns:
        TheoryReport
    """
    pooled = pool_dataset(checkpoint, dataset, step=step)
    report = TheoryReport('separability', metadata={'step': step, 'task': dataset.task,
                                                    'points': len(pooled)})

    if dataset.task == 'even_pairs':
        u = canonical_even_pairs_separator(pooled.d)
        separable, minimum = is_separable_by(u, pooled)
        if separable:
            report.add(CheckResult('canonical_separator', PASS, minimum, 0.0))
        else:
            report.add(CheckResult('canonical_separator', FAIL, minimum, 0.0,
                                   _witness_point(u, pooled)))

    tol = global_config.get("margin_tolerance")
    try:
        solution = solve_max_margin(pooled, max_updates=max_updates)
    except (NotSeparableError, ConvergenceError) as e:
        logger.info("Max-margin solve failed on the pooled dataset: %s" % e)
        report.add(CheckResult('max_margin_solution', FAIL, witness=str(e)))
        return report

    report.metadata['margin'] = solution.margin
    report.metadata['support_indices'] = solution.support
    measured = dict(solution.kkt, duality_gap=solution.duality_gap)
    if solution.certified(tol) and solution.min_margin > 0:
        report.add(CheckResult('max_margin_solution', PASS, measured, tol))
    else:
        report.add(CheckResult('max_margin_solution', FAIL, measured, tol,
                               'KKT residuals exceed the tolerance'))
    report.add(CheckResult('min_margin', PASS if solution.min_margin > 0 else FAIL,
                           solution.min_margin, 0.0))
    return report
