"""Exception hierarchy shared by the library, the service and the CLI."""


class TrisepError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(TrisepError):
    """Invalid parameters or a parameter regime where the model is undefined."""


class ResonanceError(DomainError):
    """Amplification exactly balances damping; the requested quantity diverges."""


class SingularSystemError(DomainError):
    """A linear system needed by the computation is numerically singular."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class BracketError(DomainError):
    """A bisection bracket does not change sign."""


class NumericalFailureError(TrisepError):
    """An iterative numerical scheme failed to converge."""


class PiecewiseMismatchError(TrisepError):
    """Adjacent closed-form pieces disagree at a seam where they must agree."""


class ConfigError(DomainError):
    """Malformed configuration file or command-line usage."""
