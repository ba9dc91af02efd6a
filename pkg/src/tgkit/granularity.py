"""Time-granularity algebra: comparison, tick conversion, and bucketing.

A granularity is either a fixed real-time tick length (second through year)
or the special event-ordered pseudo-granularity, which preserves only the
relative order of events and is excluded from all time arithmetic.
"""

from __future__ import annotations

import enum
from fractions import Fraction

import numpy as np

from tgkit.exceptions import (
    ExcludedGranularityError,
    GranularityOrderError,
    NegativeOffsetError,
    ValidationError,
)

# Month and year use fixed tick lengths (30 and 365 days) so that bucketing
# never depends on calendar metadata.
_TICK_SECONDS = {
    "second": 1,
    "minute": 60,
    "hour": 3_600,
    "day": 86_400,
    "week": 604_800,
    "month": 30 * 86_400,
    "year": 365 * 86_400,
}


class TimeGranularity(enum.Enum):
    """Unit of time, ordered by tick length; EVENT_ORDERED has no tick."""

    EVENT_ORDERED = "event"
    SECOND = "second"
    MINUTE = "minute"
    HOUR = "hour"
    DAY = "day"
    WEEK = "week"
    MONTH = "month"
    YEAR = "year"

    @property
    def is_event_ordered(self) -> bool:
        return self is TimeGranularity.EVENT_ORDERED

    @property
    def tick_seconds(self) -> int:
        """Tick length in seconds.

        Raises:
            ExcludedGranularityError: For the event-ordered granularity,
                which is excluded from any time operations.
        """
        if self.is_event_ordered:
            raise ExcludedGranularityError(
                "event-ordered granularity has no tick length and is "
                "excluded from time operations"
            )
        return _TICK_SECONDS[self.value]

    @classmethod
    def from_string(cls, token: str) -> TimeGranularity:
        token = token.strip().lower()
        for member in cls:
            if member.value == token:
                return member
        if token in ("event-ordered", "event_ordered", "ordered"):
            return cls.EVENT_ORDERED
        raise ValidationError(
            f"unknown granularity {token!r}; expected one of "
            f"{[m.value for m in cls]}"
        )


class Ordering(enum.Enum):
    """Result of comparing granularity ``a`` against ``b``."""

    FINER = -1
    EQUAL = 0
    COARSER = 1


class ReductionOp(enum.Enum):
    """Per-class reduction applied by discretization.

    COUNT yields a 1-dimensional feature regardless of the input feature
    width; the others preserve it.
    """

    FIRST = "first"
    LAST = "last"
    SUM = "sum"
    MEAN = "mean"
    MAX = "max"
    COUNT = "count"

    @classmethod
    def from_string(cls, token: str) -> ReductionOp:
        token = token.strip().lower()
        for member in cls:
            if member.value == token:
                return member
        raise ValidationError(
            f"unknown reduction {token!r}; expected one of "
            f"{[m.value for m in cls]}"
        )

    @property
    def needs_features(self) -> bool:
        return self in (ReductionOp.SUM, ReductionOp.MEAN, ReductionOp.MAX)


def compare_granularity(a: TimeGranularity, b: TimeGranularity) -> Ordering:
    """Compare ``a`` to ``b`` by tick length.

    Returns:
        ``Ordering.FINER`` when ``a`` has the shorter tick, ``Ordering.EQUAL``
        when they match, ``Ordering.COARSER`` when ``a`` has the longer tick.

    Raises:
        ExcludedGranularityError: If either operand is event-ordered.
    """
    ta, tb = a.tick_seconds, b.tick_seconds
    if ta < tb:
        return Ordering.FINER
    if ta > tb:
        return Ordering.COARSER
    return Ordering.EQUAL


def ticks_between(coarse: TimeGranularity, native: TimeGranularity) -> Fraction:
    """Number of native ticks spanned by one coarse tick, as an exact ratio.

    The ratio is not always integral (e.g. month over week), so callers that
    bucket timestamps must use exact rational arithmetic; see ``bucket_of``.

    Raises:
        ExcludedGranularityError: If either granularity is event-ordered.
        GranularityOrderError: If ``coarse`` is strictly finer than ``native``.
    """
    if compare_granularity(coarse, native) is Ordering.FINER:
        raise GranularityOrderError(
            f"target granularity {coarse.value} is finer than {native.value}"
        )
    return Fraction(coarse.tick_seconds, native.tick_seconds)


def bucket_of(
    t: int,
    t_anchor: int,
    native: TimeGranularity,
    coarse: TimeGranularity,
) -> int:
    """Index of the coarse bucket containing native timestamp ``t``.

    Computed as floor((t - t_anchor) / ticks_between(coarse, native)) with
    exact integer arithmetic, so fractional tick ratios bucket correctly.

    Raises:
        NegativeOffsetError: If ``t`` precedes the anchor.
        ExcludedGranularityError | GranularityOrderError: As in
            ``ticks_between``.
    """
    ratio = ticks_between(coarse, native)
    if t < t_anchor:
        raise NegativeOffsetError(f"timestamp {t} precedes anchor {t_anchor}")
    return (t - t_anchor) * ratio.denominator // ratio.numerator


def bucket_indices(
    ts: np.ndarray,
    t_anchor: int,
    native: TimeGranularity,
    coarse: TimeGranularity,
) -> np.ndarray:
    """Vectorized ``bucket_of`` over an int64 timestamp array."""
    ratio = ticks_between(coarse, native)
    if ts.size == 0:
        return np.zeros(0, dtype=np.int64)
    if int(ts.min()) < t_anchor:
        raise NegativeOffsetError(
            f"timestamp {int(ts.min())} precedes anchor {t_anchor}"
        )
    offsets = ts.astype(np.int64) - np.int64(t_anchor)
    # Guard the intermediate multiply against int64 overflow; the fallback
    # uses Python big integers.
    max_offset = int(offsets.max())
    if ratio.denominator > 1 and max_offset > (2**63 - 1) // ratio.denominator:
        py = [(int(o) * ratio.denominator) // ratio.numerator for o in offsets]
        return np.asarray(py, dtype=np.int64)
    return (offsets * ratio.denominator) // ratio.numerator


def bucket_start(
    k: int,
    t_anchor: int,
    native: TimeGranularity,
    coarse: TimeGranularity,
) -> int:
    """Smallest native timestamp whose bucket index is ``k``.

    Inverse boundary of ``bucket_of``: t >= anchor + ceil(k * ratio).
    """
    ratio = ticks_between(coarse, native)
    num = k * ratio.numerator
    return t_anchor + -(-num // ratio.denominator)
