"""Exception types shared across the package.

Every error raised by the public API derives from ``PuermError`` so
callers (and the CLI) can catch package failures with one handler while
still distinguishing the five kinds.
"""


class PuermError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(PuermError, ValueError):
    """Array dimensions do not match what the operation requires."""


class ParameterError(PuermError, ValueError):
    """A configuration value or argument is outside its valid range."""


class DataError(PuermError, ValueError):
    """Dataset contents violate an invariant (labels, emptiness, consistency)."""


class FormatError(PuermError, ValueError):
    """A file does not conform to the expected schema; messages carry the row."""


class TrainingError(PuermError, RuntimeError):
    """Training diverged or produced a non-finite objective."""
