"""Exception hierarchy shared by the solver modules."""


class PlapError(Exception):
    """Base class for all errors raised by this package."""


class PoleError(PlapError, ZeroDivisionError):
    """phi'(t) evaluated at t = 0 with p < 2."""


class DomainError(PlapError, ValueError):
    """An argument lies outside the domain of an operation (e.g. u < 0)."""


class DegenerateStartError(PlapError):
    """The series startup is impossible because f(0, alpha) = 0."""


class IntegrationError(PlapError):
    """The ODE integrator failed; ``location`` is the last radius reached."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class BracketError(PlapError):
    """No sign change of the miss distance, or no genuine root inside it."""


class AdmissibilityError(PlapError):
    """A problem or amplitude violates the preconditions of an oracle."""


class HomotopyError(PlapError):
    """Continuation in the homotopy parameter could not be completed."""

    def __init__(self, message, theta=None):
        super().__init__(message)
        self.theta = theta


class ConfigError(PlapError, ValueError):
    """Invalid run configuration; ``field`` names the offending entry."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
