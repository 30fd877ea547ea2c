"""Exception hierarchy shared by the solvers and the harness."""


class StiffPressError(Exception):
    """Base class for all package errors."""


class ConfigurationError(StiffPressError, ValueError):
    """Invalid run configuration. ``key`` names the offending entry when known."""

    def __init__(self, message, key=None):
        super().__init__(message if key is None else f"{key}: {message}")
        self.key = key


class InvariantViolation(StiffPressError):
    """A field violates a structural invariant (negative density, NaN, ...)."""


class StepRejected(StiffPressError):
    """A time step could not be completed; retry with a smaller dt."""


class NumericalFailure(StiffPressError):
    """Hard failure after exhausting dt halvings."""

    def __init__(self, message, dump=None):
        super().__init__(message)
        self.dump = dump
