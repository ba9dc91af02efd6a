"""Exception hierarchy for tgkit.

Every error raised by the library derives from ``TemporalGraphError`` so
callers (and the CLI) can map library failures to a single exit path.
"""

from __future__ import annotations


class TemporalGraphError(Exception):
    """Base class for all tgkit errors."""


class ValidationError(TemporalGraphError, ValueError):
    """Input violates a documented precondition (negative timestamp, bad arg)."""


class DimensionMismatchError(ValidationError):
    """Feature vectors within one event class disagree on dimensionality."""


class OutOfRangeError(TemporalGraphError):
    """A timestamp or interval falls outside the containing range."""


class ExcludedGranularityError(TemporalGraphError):
    """Event-ordered granularity used where time arithmetic is required."""


class GranularityOrderError(TemporalGraphError):
    """Target granularity is finer than the source granularity."""


class ReductionRequiresFeaturesError(TemporalGraphError):
    """Sum/Mean/Max reduction requested on a graph without features."""


class NegativeOffsetError(TemporalGraphError):
    """Timestamp precedes the bucketing anchor."""


class StreamOrderError(TemporalGraphError):
    """Batch timestamps regress below the most recent inserted timestamp."""


class CapacityError(TemporalGraphError):
    """Query asks for more entries than a buffer can ever hold."""


class DuplicateHookNameError(TemporalGraphError):
    """Two hooks with the same name registered under one activation key."""


class CyclicRecipeError(TemporalGraphError):
    """Hook dependency relation contains a cycle."""


class MissingAttributeError(TemporalGraphError):
    """A hook requires an attribute no earlier stage can provide."""


class ContractViolationError(TemporalGraphError):
    """A hook's actual writes differ from its declared produces set."""


class HookExecutionError(TemporalGraphError):
    """A hook raised during execution; carries the hook name."""

    def __init__(self, hook_name: str, message: str):
        super().__init__(f"hook '{hook_name}': {message}")
        self.hook_name = hook_name


class DegenerateSplitError(TemporalGraphError):
    """A chronological split leaves one part empty after boundary snapping."""


class SchemaError(TemporalGraphError):
    """A declared column is missing from a CSV header."""


class RowParseError(TemporalGraphError):
    """A CSV row failed to parse; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ExhaustionError(TemporalGraphError):
    """Negative sampling asked for more candidates than the universe holds."""
