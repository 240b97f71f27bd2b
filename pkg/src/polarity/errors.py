"""Exception types shared across the toolkit.

ConfigError maps to CLI exit code 2, DataError to exit code 3.
"""


class PolarityError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(PolarityError):
    """Bad paths, flags, or option combinations supplied by the caller."""


class DataError(PolarityError):
    """Input data that cannot be parsed or is otherwise unusable."""
