"""Exception types shared across the toolkit.

All domain errors derive from :class:`TopoBenchError` so the CLI can map
them to a single exit code.
"""


class TopoBenchError(Exception):
    """Base class for all domain errors raised by topobench."""


class InvalidParameterError(TopoBenchError, ValueError):
    """An argument violates an operation's preconditions."""


class SizeLimitError(TopoBenchError):
    """Input exceeds a configured size cap (e.g. point-count limit)."""


class CapacityExceededError(TopoBenchError):
    """A target set is larger than the prediction set can cover."""


class AssemblyFailedError(TopoBenchError):
    """Component placement failed after the maximum number of attempts."""


class OpenSurfaceError(TopoBenchError):
    """An extracted isosurface touches the grid boundary or is empty."""


class NumericOverflowError(TopoBenchError):
    """A numeric computation produced non-finite intermediate values."""


class UndefinedSimilarityError(TopoBenchError):
    """A similarity score is undefined (e.g. zero-variance features)."""
