"""Exception hierarchy shared by the library, the HTTP service, and the CLI.

Every error raised on purpose by this package derives from ConfidexError and
carries a ``category`` that the service maps to a structured 400 response and
the CLI maps to an exit code (config -> 1, data -> 2, model -> 3).
"""


class ConfidexError(Exception):
    """Base class for all errors raised by this package."""

    category = "model"


class ConfigError(ConfidexError):
    """Invalid configuration, option, or request value."""

    category = "config"


class DataError(ConfidexError):
    """Corpus, feature, or prediction data violates a precondition."""

    category = "data"


class ModelError(ConfidexError):
    """Model parameters are undefined or a computation degenerated."""

    category = "model"


class InvalidDistributionError(ModelError):
    """A vector does not describe a valid probability distribution."""
