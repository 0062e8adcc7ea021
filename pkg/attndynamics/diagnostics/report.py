from collections import OrderedDict

PASS = 'pass'
FAIL = 'fail'
NOT_YET = 'not_yet'
VACUOUS = 'vacuous'

# statuses that do not fail a report
ACCEPTED = (PASS, VACUOUS)


class CheckResult(object):
    """Outcome of one named theory check.

    Args:
        name (str): Check name.
        status (str): ``pass``, ``fail``, ``not_yet`` (the quantity has not
            left zero yet) or ``vacuous`` (recorded, not asserted).
        measured: Value(s) the decision was based on.
        threshold: Value the measurement was compared against.
        witness: For a non-passing check, what violated it.
    """

    def __init__(self, name, status, measured=None, threshold=None, witness=None):
        self.name = name
        self.status = status
        self.measured = measured
        self.threshold = threshold
        self.witness = witness

    @property
    def passed(self):
        return self.status in ACCEPTED

    def to_dictionary(self):
        return {
            'status': self.status,
            'passed': self.passed,
            'measured': self.measured,
            'threshold': self.threshold,
            'witness': self.witness,
        }

    def __repr__(self):
        return "<CheckResult %s: %s>" % (self.name, self.status)


class TheoryReport(object):
    def __init__(self, name, metadata=None):
        self.name = name
        self.checks = OrderedDict()
        self.metadata = metadata or {}

    def add(self, check):
        self.checks[check.name] = check
        return check

    @property
    def passed(self):
        return all(c.passed for c in self.checks.values())

    def failures(self):
        return [c for c in self.checks.values() if not c.passed]

    def to_dictionary(self):
        return {
            'passed': self.passed,
            'checks': OrderedDict((name, c.to_dictionary()) for name, c in self.checks.items()),
            'metadata': self.metadata,
        }

    def summary(self):
        failed = self.failures()
        if not failed:
            return "%s: %d/%d checks passed" % (self.name, len(self.checks), len(self.checks))
        return "%s: %d/%d checks passed, failing: %s" % (
            self.name, len(self.checks) - len(failed), len(self.checks),
            ', '.join('%s (%s)' % (c.name, c.status) for c in failed))

    def __repr__(self):
        return "<TheoryReport %s: %s>" % (self.name, 'passed' if self.passed else 'failed')


def positive_check(name, values, floor):
    """Tri-state check that every value is strictly above ``floor``.

    Args:
        values (list[(witness, float)]): Labeled values.
        floor (float): Absolute floor separating zero from positive.

    Returns:
        CheckResult: ``fail`` if some value is below ``-floor``, ``not_yet``
            if some value is within ``floor`` of zero, ``pass`` otherwise.
    """
    if not values:
        return CheckResult(name, FAIL, witness="nothing to check")
    witness, lowest = min(values, key=lambda item: item[1])
    if lowest < -floor:
        return CheckResult(name, FAIL, lowest, floor, witness)
    if lowest <= floor:
        return CheckResult(name, NOT_YET, lowest, floor, witness)
    return CheckResult(name, PASS, lowest, floor)


def negative_check(name, values, floor):
    """Mirror of :func:`positive_check` for values that must be below ``-floor``."""
    check = positive_check(name, [(w, -v) for w, v in values], floor)
    if check.measured is not None:
        check.measured = -check.measured
    return check
