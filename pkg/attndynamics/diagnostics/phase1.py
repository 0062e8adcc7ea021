from attndynamics.config_init import config as global_config
from attndynamics.diagnostics.report import (
    FAIL,
    PASS,
    CheckResult,
    TheoryReport,
    negative_check,
    positive_check
)
from attndynamics.exceptions import TrajectoryError
from attndynamics.gradients.analytic import gradient_norm_bounds
from attndynamics.model.transformer import attention_score, token_score
from attndynamics.sequences.dataset import build_task_dataset
from attndynamics.sequences.sequence import TOKENS, flip


def _keys(position, L, query_token):
    """Tokens that can occur at ``position`` in a length-L sequence ending in ``query_token``."""
    if position == L:
        return [query_token]
    return list(TOKENS)


def _even_pairs_gaps(params, L):
    """Attention gaps that concentrate on the first token.

    Yields ``(check, witness, gap)`` for every realizable key pair.
    """
    for w in TOKENS:
        def score(position, token):
            return attention_score(params, position, token, L, w)

        for position in range(2, L + 1):
            for key in _keys(position, L, w):
                witness = {'L': L, 'query': w, 'position': position, 'key': key}
                yield ('attention_first_token_gap', witness,
                       score(1, w) - score(position, key))
                yield ('attention_flipped_first_gap', witness,
                       score(position, key) - score(1, flip(w)))
        # the query's own score at position L is not ordered against the second token
        for position in range(3, L):
            for second in TOKENS:
                for key in TOKENS:
                    witness = {'L': L, 'query': w, 'position': position,
                               'second': second, 'key': key}
                    yield ('attention_second_token_gap', witness,
                           score(2, second) - score(position, key))


def _cot_gaps(params, L, l0):
    """Attention gaps for CoT lengths ``L > L_0``, centered on ``l0 = L - L_0 + 1``.

    Negative samples (token at l0 differs from the query) attend to l0, whose
    token score is negative, and positive samples attend to the first token.
    """
    pivot = L - l0 + 1
    for w in TOKENS:
        def score(position, token):
            return attention_score(params, position, token, L, w)

        for position in range(1, L + 1):
            if position == pivot:
                continue
            for key in _keys(position, L, w):
                witness = {'L': L, 'query': w, 'pivot': pivot, 'position': position, 'key': key}
                yield ('attention_cot_flipped_gap', witness,
                       score(pivot, flip(w)) - score(position, key))
                yield ('attention_cot_matching_gap', witness,
                       score(position, key) - score(pivot, w))
                if position not in (1, L):
                    for first in TOKENS:
                        yield ('attention_cot_first_token_gap', dict(witness, first=first),
                               score(1, first) - score(position, key))


def attention_gaps(params, task, max_length, l0=None):
    """Every Phase-1 attention gap of the task, grouped by check name.

    Even-pairs gaps apply to every length for even pairs, and to lengths up
    to ``L_0`` for parity-CoT (at ``L = L_0`` the CoT label compares the
    first and last tokens). Longer parity-CoT lengths use the CoT gaps.

    Returns:
        dict: check name -> list of ``(witness, gap)``.
    """
    gaps = {}
    for L in range(2, max_length + 1):
        if task == 'parity_cot' and L > l0:
            source = _cot_gaps(params, L, l0)
        else:
            source = _even_pairs_gaps(params, L)
        for name, witness, gap in source:
            gaps.setdefault(name, []).append((witness, gap))
    return gaps


def _score_increasing(records, t0):
    window = [r for r in records if t0 / 2.0 <= r.t <= t0]
    name = 'first_token_score_increasing'
    if len(window) < 2:
        return CheckResult(name, FAIL, witness="fewer than two snapshots in [t0/2, t0]")
    increments = [(b.t, b.ts1 - a.ts1) for a, b in zip(window, window[1:])]
    step, smallest = min(increments, key=lambda item: item[1])
    if smallest <= 0:
        return CheckResult(name, FAIL, smallest, 0.0, {'step': step})
    return CheckResult(name, PASS, smallest, 0.0)


def phase1_report(trajectory, t0=None, floor=None):
    """Sign and ordering checks of token and attention scores at the end of Phase 1.

    Args:
        trajectory (Trajectory): Run holding a checkpoint at ``t0``.
        t0 (int, optional): Step to check. Defaults to the run's ``t0``.
        floor (float, optional): Absolute floor for strict signs. Defaults to
            the ``attention_floor`` config value.

    Returns:
        TheoryReport
    """
    config = trajectory.config
    if t0 is None:
        t0 = config.t0
    if floor is None:
        floor = global_config.get("attention_floor")
    params = trajectory.checkpoint_at(t0)
    max_length = config.max_length
    report = TheoryReport('phase1', metadata={'t0': t0, 'task': config.task})

    report.add(positive_check('first_token_score_positive',
                              [({'token': w}, token_score(params, 1, w)) for w in TOKENS],
                              floor))
    report.add(_score_increasing(trajectory.records, t0))
    report.add(negative_check('later_token_scores_negative',
                              [({'position': p, 'token': w}, token_score(params, p, w))
                               for p in range(2, max_length + 1) for w in TOKENS],
                              floor))
    report.add(negative_check('second_token_score_lowest',
                              [({'position': p, 'token': w},
                                token_score(params, 2, w) - token_score(params, p, w))
                               for p in range(3, max_length + 1) for w in TOKENS],
                              floor))

    gaps = attention_gaps(params, config.task, max_length, config.l0)
    for name in sorted(gaps):
        report.add(positive_check(name, gaps[name], floor))

    report.add(gradient_bounds_check(trajectory))
    return report


def gradient_bounds_check(trajectory, slack=1e-12):
    """Gradient norms stay within their a-priori bounds at every checkpoint."""
    bounds = trajectory.gradient_bounds
    if not bounds:
        if not trajectory.checkpoints:
            raise TrajectoryError("Trajectory holds neither gradient bounds nor checkpoints")
        config = trajectory.config
        dataset = build_task_dataset(config.task, l_max=config.l_max, l0=config.l0)
        bounds = {t: gradient_norm_bounds(params, dataset)
                  for t, params in trajectory.checkpoints.items()}
    worst = None
    for t, b in bounds.items():
        excess = max((b['grad_u_norm'] - b['grad_u_bound']) / max(1.0, b['grad_u_bound']),
                     (b['grad_W_norm'] - b['grad_W_bound']) / max(1.0, b['grad_W_bound']))
        if worst is None or excess > worst[1]:
            worst = (t, excess)
    name = 'gradient_norm_bounds'
    if worst[1] > slack:
        return CheckResult(name, FAIL, worst[1], slack, {'step': worst[0]})
    return CheckResult(name, PASS, worst[1], slack)
