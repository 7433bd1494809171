"""Exception types used across the package."""


class GaborScatterError(Exception):
    """Base class for all package-specific errors."""


class InvalidArgument(GaborScatterError, ValueError):
    """A caller-supplied value violates a documented precondition."""


class ConfigError(InvalidArgument):
    """An experiment configuration file is malformed or inconsistent."""


class NotAFrameError(GaborScatterError):
    """The lower frame bound is numerically zero: no stable reconstruction."""


class ConvergenceError(GaborScatterError):
    """Iterative bound estimation failed to converge.

    Partial estimates are attached so callers can inspect how far the
    iteration got.
    """

    def __init__(self, message, upper=None, lower=None, iterations=None):
        super().__init__(message)
        self.upper = upper
        self.lower = lower
        self.iterations = iterations


class BudgetExceeded(GaborScatterError, RuntimeError):
    """The scattering path tree outgrew the configured node budget."""

    def __init__(self, message, layer=None):
        super().__init__(message)
        self.layer = layer


class FormatError(GaborScatterError):
    """A file being read does not match its declared format."""


class VerificationFailure(GaborScatterError):
    """At least one bound check in a verification run failed."""
