class AttnDynamicsError(Exception):
    """Base class for every error raised by attndynamics."""

    def __init__(self, *args, **kwargs):
        Exception.__init__(self, *args, **kwargs)


class ValidationError(AttnDynamicsError, ValueError):
    """An input falls outside the domain of an operation."""
    pass


class ConfigError(AttnDynamicsError):
    """A run configuration is malformed. ``field`` names the offending key."""

    def __init__(self, field, message):
        self.field = field
        AttnDynamicsError.__init__(self, "%s: %s" % (field, message))


class NotSeparableError(AttnDynamicsError):
    """The pooled dataset admits no strict linear separator."""
    pass


class ConvergenceError(AttnDynamicsError):
    """The max-margin solver hit its update cap without meeting tolerance."""
    pass


class DivergenceError(AttnDynamicsError):
    """Training produced a non-finite or exploding loss."""

    def __init__(self, step, loss):
        self.step = step
        self.loss = loss
        AttnDynamicsError.__init__(
            self, "loss diverged at step %d (loss=%r)" % (step, loss))


class TrajectoryError(ValidationError):
    """A trajectory is missing the snapshots an analysis needs."""
    pass


class ArtifactIOError(AttnDynamicsError):
    """Reading or writing a run artifact failed."""

    def __init__(self, path, reason):
        self.path = path
        AttnDynamicsError.__init__(self, "%s: %s" % (path, reason))
