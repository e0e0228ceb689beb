"""Exception hierarchy shared by all modules.

Infeasibility is never an exception; solvers report it through
:class:`divelect.solvers.SolverOutcome`. Exceptions are reserved for bad
input and for exceeded resource caps.
"""


class DivelectError(Exception):
    """Base class for every error raised by this package."""


class InvalidElection(DivelectError, ValueError):
    pass


class InvalidCommittee(DivelectError, ValueError):
    pass


class ConfigurationError(DivelectError, ValueError):
    """A required optional input (e.g. label weights) is missing or unusable."""


class SizeLimitError(DivelectError):
    """An exhaustive search would exceed its configured instance-size limit."""


class ResourceLimitError(DivelectError):
    """A dynamic program would exceed its configured memory budget."""


class InvariantViolation(DivelectError, AssertionError):
    """An internal or input invariant does not hold."""


class ParseError(DivelectError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DerivationError(DivelectError, ValueError):
    """Labels cannot be derived for a project."""
