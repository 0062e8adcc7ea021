from attndynamics.config_init import config as global_config
from attndynamics.diagnostics.report import FAIL, PASS, CheckResult, TheoryReport
from attndynamics.exceptions import TrajectoryError
from attndynamics.model.transformer import attention_score, token_score
from attndynamics.sequences.sequence import TOKENS, flip


def _deviation(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _flip_position(task, L, l0):
    """Position whose global a/b flip leaves the attention score unchanged."""
    if task == 'parity_cot' and L >= l0:
        return L - l0 + 1
    return 1


def _pairs(params, task, max_length, l0):
    """Yield ``(check, witness, a, b)`` for every a/b equality of a zero-initialized run."""
    for position in range(1, max_length + 1):
        yield ('token_score_symmetry', {'position': position},
               token_score(params, position, 'a'), token_score(params, position, 'b'))
    for L in range(2, max_length + 1):
        pivot = _flip_position(task, L, l0)
        for w in TOKENS:
            yield ('attention_flip_symmetry', {'L': L, 'query': w, 'position': pivot},
                   attention_score(params, pivot, w, L, w),
                   attention_score(params, pivot, flip(w), L, flip(w)))
            first_key = 1 if pivot != 1 else 2
            for position in range(first_key, L):
                if position == pivot:
                    continue
                yield ('attention_key_symmetry', {'L': L, 'query': w, 'position': position},
                       attention_score(params, position, 'a', L, w),
                       attention_score(params, position, 'b', L, w))


def symmetry_report(trajectory, tolerance=None):
    """Exact a/b symmetries of a zero-initialized run at every stored checkpoint.

    Token scores of ``a`` and ``b`` agree at every position. Attention scores
    are unchanged by flipping every token when the key sits at the first
    position (at ``l0 = L - L_0 + 1`` for parity lengths ``L >= L_0``), and by
    flipping only the key at the other non-query positions.

    Args:
        trajectory (Trajectory): Run holding checkpoints.
        tolerance (float, optional): Allowed ``|a - b| / max(1, |a|, |b|)``.
            Defaults to the ``symmetry_tolerance`` config value.

    Returns:
        TheoryReport
    """
    if not trajectory.checkpoints:
        raise TrajectoryError("Trajectory holds no checkpoints")
    if tolerance is None:
        tolerance = global_config.get("symmetry_tolerance")
    config = trajectory.config
    worst = {}
    for t, params in trajectory.checkpoints.items():
        for name, witness, a, b in _pairs(params, config.task, config.max_length, config.l0):
            deviation = _deviation(a, b)
            if name not in worst or deviation > worst[name][0]:
                worst[name] = (deviation, dict(witness, step=t, values=[a, b]))

    report = TheoryReport('symmetry', metadata={'task': config.task,
                                                'checkpoints': len(trajectory.checkpoints)})
    for name in ('token_score_symmetry', 'attention_flip_symmetry', 'attention_key_symmetry'):
        if name not in worst:
            continue
        deviation, witness = worst[name]
        if deviation > tolerance:
            report.add(CheckResult(name, FAIL, deviation, tolerance, witness))
        else:
            report.add(CheckResult(name, PASS, deviation, tolerance))
    return report
