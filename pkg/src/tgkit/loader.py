"""Graph views and unified batch iteration.

A view is a lightweight handle (storage reference + half-open time interval);
it never copies event data. Iteration is either by a fixed event count
(continuous-time style) or by a fixed time span (snapshot style); both yield
the same slice objects, which ``materialize`` turns into attribute-carrying
batches for the hook pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Iterator

import numpy as np

from tgkit.exceptions import (
    ExcludedGranularityError,
    OutOfRangeError,
    ValidationError,
)
from tgkit.granularity import TimeGranularity, bucket_of, ticks_between
from tgkit.graph import TemporalGraph, Timestamp, lower_bound

if TYPE_CHECKING:
    from tgkit.hooks import HookManager

#: Attribute names every materialized batch carries before any hook runs.
BUILTIN_ATTRS = frozenset({"src", "dst", "time", "edge_feat", "node_events"})


@dataclass(frozen=True)
class GraphView:
    """Read-only handle over a time interval of a graph.

    ``iter_granularity`` is the view's default span for time-based
    iteration; ``iterate_by_time`` falls back to it when no span is given.
    """

    graph: TemporalGraph
    t_start: Timestamp
    t_end: Timestamp
    iter_granularity: TimeGranularity | None = None

    def __post_init__(self) -> None:
        if self.t_start > self.t_end:
            raise ValidationError(
                f"view interval start {self.t_start} exceeds end {self.t_end}"
            )
        t_min, t_max = self.graph.t_min, self.graph.t_max
        if t_min is not None and not (
            t_min <= self.t_start and self.t_end <= t_max + 1
        ):
            raise OutOfRangeError(
                f"view interval [{self.t_start}, {self.t_end}) outside graph "
                f"range [{t_min}, {t_max + 1})"
            )

    @classmethod
    def full(cls, graph: TemporalGraph) -> GraphView:
        if graph.t_min is None:
            return cls(graph, 0, 0)
        return cls(graph, graph.t_min, graph.t_max + 1)

    @property
    def edge_range(self) -> tuple[int, int]:
        return (
            lower_bound(self.graph, self.t_start),
            lower_bound(self.graph, self.t_end),
        )

    @property
    def node_range(self) -> tuple[int, int]:
        node_t = self.graph.node_t
        return (
            int(np.searchsorted(node_t, self.t_start, side="left")),
            int(np.searchsorted(node_t, self.t_end, side="left")),
        )

    @property
    def num_edges(self) -> int:
        lo, hi = self.edge_range
        return hi - lo

    @property
    def num_node_events(self) -> int:
        lo, hi = self.node_range
        return hi - lo

    @property
    def num_events(self) -> int:
        return self.num_edges + self.num_node_events


def slice_view(
    view: GraphView, t_start: Timestamp, t_end: Timestamp
) -> GraphView:
    """Narrow a view to [t_start, t_end); O(1) aside from binary searches.

    Raises:
        OutOfRangeError: If the requested interval is not contained in the
            view's interval.
    """
    if t_start > t_end:
        raise ValidationError(f"interval start {t_start} exceeds end {t_end}")
    if t_start < view.t_start or t_end > view.t_end:
        raise OutOfRangeError(
            f"slice [{t_start}, {t_end}) not contained in view "
            f"[{view.t_start}, {view.t_end})"
        )
    return GraphView(view.graph, t_start, t_end, view.iter_granularity)


@dataclass(frozen=True)
class ByEvents:
    """Fixed-event-count batching (continuous-time iteration)."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"batch size must be >= 1, got {self.n}")


@dataclass(frozen=True)
class ByTime:
    """Fixed-time-span batching (snapshot iteration)."""

    span: TimeGranularity

    def __post_init__(self) -> None:
        if self.span.is_event_ordered:
            raise ExcludedGranularityError(
                "event-ordered span is excluded from time operations"
            )


BatchSpec = ByEvents | ByTime


@dataclass(frozen=True)
class EventSlice:
    """One batch worth of events: contiguous column views plus its interval.

    ``interval`` is half-open in native ticks. For time batches it is the
    exact snapshot window (empty windows included); for event batches it is
    the tight [first event t, last event t + 1) cover.
    """

    graph: TemporalGraph
    edge_lo: int
    edge_hi: int
    node_lo: int
    node_hi: int
    interval: tuple[Timestamp, Timestamp]
    index: int

    @property
    def src(self) -> np.ndarray:
        return self.graph.edge_src[self.edge_lo : self.edge_hi]

    @property
    def dst(self) -> np.ndarray:
        return self.graph.edge_dst[self.edge_lo : self.edge_hi]

    @property
    def time(self) -> np.ndarray:
        return self.graph.edge_t[self.edge_lo : self.edge_hi]

    @property
    def edge_feat(self) -> np.ndarray | None:
        if self.graph.edge_feat is None:
            return None
        return self.graph.edge_feat[self.edge_lo : self.edge_hi]

    @property
    def edge_rows(self) -> np.ndarray:
        return np.arange(self.edge_lo, self.edge_hi, dtype=np.int64)

    @property
    def node_time(self) -> np.ndarray:
        return self.graph.node_t[self.node_lo : self.node_hi]

    @property
    def node_ids(self) -> np.ndarray:
        return self.graph.node_ids[self.node_lo : self.node_hi]

    @property
    def node_feat(self) -> np.ndarray | None:
        if self.graph.node_feat is None:
            return None
        return self.graph.node_feat[self.node_lo : self.node_hi]

    @property
    def num_edges(self) -> int:
        return self.edge_hi - self.edge_lo

    @property
    def num_events(self) -> int:
        return (self.edge_hi - self.edge_lo) + (self.node_hi - self.node_lo)


class AttrMap(dict):
    """Batch attribute map that records writes for hook contract checks.

    Attributes are never removed once produced, so all removal paths raise.
    """

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self.written: set[str] = set()

    def __setitem__(self, key: str, value: Any) -> None:
        super().__setitem__(key, value)
        self.written.add(key)

    def update(self, *args: Any, **kwargs: Any) -> None:  # type: ignore[override]
        for k, v in dict(*args, **kwargs).items():
            self[k] = v

    def setdefault(self, key: str, default: Any = None) -> Any:
        if key not in self:
            self[key] = default
        return super().__getitem__(key)

    def _removed(self, *_: Any) -> None:
        from tgkit.exceptions import ContractViolationError

        raise ContractViolationError("batch attributes are never removed")

    __delitem__ = _removed
    pop = _removed
    popitem = _removed
    clear = _removed


@dataclass
class MaterializedBatch:
    """An event slice enriched with named attributes.

    ``attrs`` starts as the built-ins {src, dst, time, edge_feat,
    node_events} and grows by each hook's produces set.
    """

    slice: EventSlice
    interval: tuple[Timestamp, Timestamp]
    attrs: AttrMap = field(default_factory=AttrMap)


def _merged_chunks(view: GraphView, n: int) -> Iterator[tuple[int, int, int, int]]:
    """Chunk the view's unified event sequence into runs of n events.

    Edge and node events merge by timestamp with edge events first among
    ties; within a chunk each class stays a contiguous row range.
    """
    e_lo, e_hi = view.edge_range
    n_lo, n_hi = view.node_range
    num_e, num_n = e_hi - e_lo, n_hi - n_lo
    total = num_e + num_n
    if total == 0:
        return
    if num_n == 0:
        for b, start in enumerate(range(0, num_e, n)):
            yield e_lo + start, e_lo + min(start + n, num_e), n_lo, n_lo
        return
    t_all = np.concatenate([view.graph.edge_t[e_lo:e_hi], view.graph.node_t[n_lo:n_hi]])
    kind = np.concatenate(
        [np.zeros(num_e, dtype=np.int8), np.ones(num_n, dtype=np.int8)]
    )
    order = np.lexsort((kind, t_all))
    is_edge = order < num_e
    edges_before = np.concatenate([[0], np.cumsum(is_edge)])
    for start in range(0, total, n):
        stop = min(start + n, total)
        yield (
            e_lo + int(edges_before[start]),
            e_lo + int(edges_before[stop]),
            n_lo + (start - int(edges_before[start])),
            n_lo + (stop - int(edges_before[stop])),
        )


def iterate_by_events(view: GraphView, n: int) -> Iterator[EventSlice]:
    """Partition the view's events into time-ordered batches of n events.

    Every batch holds exactly ``n`` events (edge and node events counted
    together in unified time order) except possibly the last. A single
    timestamp's events may split across batches.
    """
    if n < 1:
        raise ValidationError(f"batch size must be >= 1, got {n}")
    for index, (e_lo, e_hi, n_lo, n_hi) in enumerate(_merged_chunks(view, n)):
        times = []
        if e_hi > e_lo:
            times += [int(view.graph.edge_t[e_lo]), int(view.graph.edge_t[e_hi - 1])]
        if n_hi > n_lo:
            times += [int(view.graph.node_t[n_lo]), int(view.graph.node_t[n_hi - 1])]
        yield EventSlice(
            view.graph, e_lo, e_hi, n_lo, n_hi,
            interval=(min(times), max(times) + 1),
            index=index,
        )


def iterate_by_time(
    view: GraphView, span: TimeGranularity | None = None
) -> Iterator[EventSlice]:
    """Partition the view into consecutive fixed-span snapshot batches.

    Snapshots are half-open windows anchored at the view's first event
    time; empty windows still yield (empty) batches so snapshot indices
    stay arithmetically regular. Batch k covers
    [t0 + k*delta, t0 + (k+1)*delta) where delta is the span expressed in
    native ticks (exact rational arithmetic).

    Raises:
        ExcludedGranularityError: Event-ordered graph or span.
        GranularityOrderError: Span finer than the native granularity.
        ValidationError: No span given and the view declares none.
    """
    span = span if span is not None else view.iter_granularity
    if span is None:
        raise ValidationError("no time span: pass one or set iter_granularity")
    if span.is_event_ordered or view.graph.granularity.is_event_ordered:
        raise ExcludedGranularityError(
            "event-ordered granularity is excluded from time operations"
        )
    native = view.graph.granularity
    ticks_between(span, native)  # raises GranularityOrderError if finer

    e_lo, e_hi = view.edge_range
    n_lo, n_hi = view.node_range
    times = []
    if e_hi > e_lo:
        times += [int(view.graph.edge_t[e_lo]), int(view.graph.edge_t[e_hi - 1])]
    if n_hi > n_lo:
        times += [int(view.graph.node_t[n_lo]), int(view.graph.node_t[n_hi - 1])]
    if not times:
        return
    anchor, t_last = min(times), max(times)
    num_buckets = bucket_of(t_last, anchor, native, span) + 1

    # Window k starts at anchor + ceil(k * num / den) native ticks, where
    # num/den is the span expressed as an exact ratio of native ticks.
    ratio = ticks_between(span, native)
    num, den = ratio.numerator, ratio.denominator
    ks = np.arange(num_buckets + 1, dtype=np.int64)
    if num_buckets * num > 2**62:
        bounds = [anchor + -(-(int(k) * num) // den) for k in ks]
    else:
        bounds = anchor + -(-(ks * num) // den)
    edge_cuts = np.searchsorted(view.graph.edge_t[e_lo:e_hi], bounds, side="left")
    node_cuts = np.searchsorted(view.graph.node_t[n_lo:n_hi], bounds, side="left")
    for k in range(num_buckets):
        yield EventSlice(
            view.graph,
            e_lo + int(edge_cuts[k]),
            e_lo + int(edge_cuts[k + 1]),
            n_lo + int(node_cuts[k]),
            n_lo + int(node_cuts[k + 1]),
            interval=(int(bounds[k]), int(bounds[k + 1])),
            index=k,
        )


def materialize(
    slice_: EventSlice,
    manager: "HookManager | None" = None,
    key: str | None = None,
) -> MaterializedBatch:
    """Populate built-in attributes from columns, then run the key's hooks.

    With no manager the batch carries built-ins only. Hook errors propagate
    with the failing hook's name attached.
    """
    attrs = AttrMap(
        src=slice_.src,
        dst=slice_.dst,
        time=slice_.time,
        edge_feat=slice_.edge_feat,
        node_events={
            "time": slice_.node_time,
            "node": slice_.node_ids,
            "feat": slice_.node_feat,
        },
    )
    batch = MaterializedBatch(slice=slice_, interval=slice_.interval, attrs=attrs)
    if manager is not None:
        if key is None:
            raise ValidationError("materialize with a manager requires a key")
        manager.execute(key, batch)
    return batch


def iterate(
    view: GraphView,
    spec: BatchSpec,
    manager: "HookManager | None" = None,
    key: str | None = None,
) -> Iterator[MaterializedBatch]:
    """Iterate a view under a batch spec, materializing every batch."""
    if isinstance(spec, ByEvents):
        slices = iterate_by_events(view, spec.n)
    elif isinstance(spec, ByTime):
        slices = iterate_by_time(view, spec.span)
    else:
        raise ValidationError(f"unknown batch spec {spec!r}")
    for s in slices:
        yield materialize(s, manager, key)
