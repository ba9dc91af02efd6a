"""Immutable time-sorted columnar event storage.

The graph is the single source of truth: parallel numpy columns for edge
events and node events, each sorted non-decreasing by timestamp with input
order preserved among equal timestamps. All slicing and iteration layers
reference these columns read-only; nothing downstream copies event data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from tgkit.exceptions import (
    DimensionMismatchError,
    OutOfRangeError,
    ValidationError,
)
from tgkit.granularity import TimeGranularity

Timestamp = int
NodeId = int


@dataclass(frozen=True)
class EdgeEvent:
    """Interaction between two nodes at time ``t`` with an optional feature."""

    t: Timestamp
    src: NodeId
    dst: NodeId
    feat: np.ndarray | None = None


@dataclass(frozen=True)
class NodeEvent:
    """Arrival of a new feature vector at one node."""

    t: Timestamp
    node: NodeId
    feat: np.ndarray


@dataclass(frozen=True)
class BucketMapping:
    """How a discretized graph's bucket indices map back to real time.

    Bucket ``k`` starts at ``anchor + k * ticks_between(target, source)``
    source-granularity ticks.
    """

    anchor: Timestamp
    source_granularity: TimeGranularity


@dataclass(frozen=True)
class GraphStats:
    num_nodes: int
    num_edges: int
    num_node_events: int
    num_unique_edges: int
    num_unique_steps: int
    surprise: float | None = None


def _as_feature_matrix(
    feats: Sequence[np.ndarray | None], what: str
) -> np.ndarray | None:
    """Stack per-event feature vectors into a dense [n, d] matrix.

    Feature absence is graph-wide: either every event carries a vector of
    one shared dimension, or none does.
    """
    if len(feats) == 0 or all(f is None for f in feats):
        return None
    if any(f is None for f in feats):
        raise DimensionMismatchError(
            f"{what}: feature absence must be graph-wide, found a mix of "
            "present and missing features"
        )
    dims = {np.asarray(f).reshape(-1).shape[0] for f in feats}
    if len(dims) != 1:
        raise DimensionMismatchError(
            f"{what}: inconsistent feature dimensions {sorted(dims)}"
        )
    return np.stack([np.asarray(f, dtype=np.float64).reshape(-1) for f in feats])


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class TemporalGraph:
    """Time-sorted columnar store of edge and node events.

    Attributes:
        granularity: Native time granularity of the timestamps.
        edge_t, edge_src, edge_dst: Parallel int64 edge columns, sorted
            non-decreasing by ``edge_t``.
        edge_feat: Optional float64 [num_edges, d_edge] matrix.
        node_t, node_ids: Parallel int64 node-event columns, sorted
            non-decreasing by ``node_t``.
        node_feat: Optional float64 [num_node_events, d_node] matrix
            (present iff there are node events with features).
        static_feats: Optional float64 [num_nodes, d_static] matrix.
        bucket_mapping: Set on discretized graphs; maps bucket indices back
            to source-granularity time.

    The storage is immutable after construction (arrays are marked
    read-only) and safe to share across concurrent readers.
    """

    granularity: TimeGranularity
    edge_t: np.ndarray
    edge_src: np.ndarray
    edge_dst: np.ndarray
    edge_feat: np.ndarray | None = None
    node_t: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    node_ids: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    node_feat: np.ndarray | None = None
    static_feats: np.ndarray | None = None
    bucket_mapping: BucketMapping | None = None

    def __post_init__(self) -> None:
        for name in ("edge_t", "edge_src", "edge_dst", "node_t", "node_ids"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.int64)
            object.__setattr__(self, name, _freeze(arr))
        for name in ("edge_feat", "node_feat", "static_feats"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.ascontiguousarray(arr, dtype=np.float64)
                object.__setattr__(self, name, _freeze(arr))

        ne = self.edge_t.shape[0]
        if not (self.edge_src.shape[0] == self.edge_dst.shape[0] == ne):
            raise ValidationError("edge columns must have equal length")
        if self.node_t.shape[0] != self.node_ids.shape[0]:
            raise ValidationError("node-event columns must have equal length")
        if self.edge_feat is not None and self.edge_feat.shape[0] != ne:
            raise ValidationError("edge_feat row count must match num_edges")
        if self.node_feat is not None and self.node_feat.shape[0] != self.node_t.shape[0]:
            raise ValidationError("node_feat row count must match node events")

        for t_col, what in ((self.edge_t, "edge"), (self.node_t, "node event")):
            if t_col.size and int(t_col.min()) < 0:
                raise ValidationError(f"{what} timestamps must be non-negative")
            if t_col.size and np.any(np.diff(t_col) < 0):
                raise ValidationError(f"{what} timestamps must be sorted")

        for id_col, what in (
            (self.edge_src, "src"),
            (self.edge_dst, "dst"),
            (self.node_ids, "node"),
        ):
            if id_col.size and int(id_col.min()) < 0:
                raise ValidationError(f"{what} ids must be non-negative")

        if self.static_feats is not None:
            if self.static_feats.shape[0] != self.num_nodes:
                raise ValidationError(
                    f"static_feats has {self.static_feats.shape[0]} rows but the "
                    f"graph has {self.num_nodes} nodes (ids are dense, so rows "
                    "must equal max id + 1)"
                )

    # -- basic shape ------------------------------------------------------

    @property
    def num_edges(self) -> int:
        return int(self.edge_t.shape[0])

    @property
    def num_node_events(self) -> int:
        return int(self.node_t.shape[0])

    @property
    def num_events(self) -> int:
        return self.num_edges + self.num_node_events

    @property
    def num_nodes(self) -> int:
        """Node-id capacity, max id + 1 (ids are dense non-negative ints)."""
        hi = -1
        if self.num_edges:
            hi = max(hi, int(self.edge_src.max()), int(self.edge_dst.max()))
        if self.num_node_events:
            hi = max(hi, int(self.node_ids.max()))
        return hi + 1

    @property
    def t_min(self) -> Timestamp | None:
        lows = []
        if self.num_edges:
            lows.append(int(self.edge_t[0]))
        if self.num_node_events:
            lows.append(int(self.node_t[0]))
        return min(lows) if lows else None

    @property
    def t_max(self) -> Timestamp | None:
        highs = []
        if self.num_edges:
            highs.append(int(self.edge_t[-1]))
        if self.num_node_events:
            highs.append(int(self.node_t[-1]))
        return max(highs) if highs else None

    @cached_property
    def ts_index(self) -> dict[int, int]:
        """Map from each distinct edge timestamp to its first row offset."""
        if self.num_edges == 0:
            return {}
        values, first = np.unique(self.edge_t, return_index=True)
        return {int(v): int(i) for v, i in zip(values, first)}

    # -- construction -----------------------------------------------------

    @classmethod
    def from_arrays(
        cls,
        edge_t: np.ndarray,
        edge_src: np.ndarray,
        edge_dst: np.ndarray,
        granularity: TimeGranularity,
        edge_feat: np.ndarray | None = None,
        node_t: np.ndarray | None = None,
        node_ids: np.ndarray | None = None,
        node_feat: np.ndarray | None = None,
        static_feats: np.ndarray | None = None,
        bucket_mapping: BucketMapping | None = None,
        assume_sorted: bool = False,
    ) -> TemporalGraph:
        """Build a graph from raw columns, stably sorting by timestamp.

        Stable sorting preserves input order among equal timestamps, which
        makes construction reproducible and idempotent.
        """
        edge_t = np.asarray(edge_t, dtype=np.int64)
        node_t = (
            np.zeros(0, dtype=np.int64)
            if node_t is None
            else np.asarray(node_t, dtype=np.int64)
        )
        node_ids = (
            np.zeros(0, dtype=np.int64)
            if node_ids is None
            else np.asarray(node_ids, dtype=np.int64)
        )
        edge_src = np.asarray(edge_src, dtype=np.int64)
        edge_dst = np.asarray(edge_dst, dtype=np.int64)

        if not assume_sorted:
            if edge_t.size and np.any(np.diff(edge_t) < 0):
                order = np.argsort(edge_t, kind="stable")
                edge_t = edge_t[order]
                edge_src = edge_src[order]
                edge_dst = edge_dst[order]
                if edge_feat is not None:
                    edge_feat = np.asarray(edge_feat, dtype=np.float64)[order]
            if node_t.size and np.any(np.diff(node_t) < 0):
                order = np.argsort(node_t, kind="stable")
                node_t = node_t[order]
                node_ids = node_ids[order]
                if node_feat is not None:
                    node_feat = np.asarray(node_feat, dtype=np.float64)[order]

        return cls(
            granularity=granularity,
            edge_t=edge_t,
            edge_src=edge_src,
            edge_dst=edge_dst,
            edge_feat=edge_feat,
            node_t=node_t,
            node_ids=node_ids,
            node_feat=node_feat,
            static_feats=static_feats,
            bucket_mapping=bucket_mapping,
        )


def build_graph(
    edge_events: Sequence[EdgeEvent],
    node_events: Sequence[NodeEvent] = (),
    granularity: TimeGranularity = TimeGranularity.SECOND,
    static_feats: np.ndarray | None = None,
) -> TemporalGraph:
    """Build an immutable graph from event lists.

    Events are stably sorted by timestamp (input order preserved among
    equal timestamps). Empty graphs are legal.

    Raises:
        ValidationError: On a negative timestamp or id.
        DimensionMismatchError: If feature dimensions disagree within an
            event class, or feature presence is not graph-wide.
    """
    edge_t = np.asarray([e.t for e in edge_events], dtype=np.int64)
    edge_src = np.asarray([e.src for e in edge_events], dtype=np.int64)
    edge_dst = np.asarray([e.dst for e in edge_events], dtype=np.int64)
    edge_feat = _as_feature_matrix([e.feat for e in edge_events], "edge events")

    node_t = np.asarray([e.t for e in node_events], dtype=np.int64)
    node_ids = np.asarray([e.node for e in node_events], dtype=np.int64)
    node_feat = _as_feature_matrix([e.feat for e in node_events], "node events")

    return TemporalGraph.from_arrays(
        edge_t,
        edge_src,
        edge_dst,
        granularity,
        edge_feat=edge_feat,
        node_t=node_t,
        node_ids=node_ids,
        node_feat=node_feat,
        static_feats=static_feats,
    )


def lower_bound(graph: TemporalGraph, t: Timestamp) -> int:
    """Smallest edge row index ``i`` with ``edge_t[i] >= t``.

    Returns ``num_edges`` when no such row exists.
    """
    return int(np.searchsorted(graph.edge_t, t, side="left"))


def _unique_pair_keys(src: np.ndarray, dst: np.ndarray, base: int) -> np.ndarray:
    return np.unique(src.astype(np.int64) * np.int64(base) + dst.astype(np.int64))


def graph_stats(
    graph: TemporalGraph, split_time: Timestamp | None = None
) -> GraphStats:
    """Counts of nodes, edges, unique pairs, unique steps, and surprise.

    ``num_unique_steps`` counts distinct timestamps across both edge and
    node events. With ``split_time`` given, surprise is the fraction of
    unique (src, dst) pairs at ``t >= split_time`` never seen strictly
    before it (set semantics over unique pairs); 0.0 when the later side
    has no edges.

    Raises:
        OutOfRangeError: If ``split_time`` falls outside [t_min, t_max].
    """
    ids = np.concatenate([graph.edge_src, graph.edge_dst, graph.node_ids])
    num_nodes = int(np.unique(ids).size) if ids.size else 0

    base = graph.num_nodes if graph.num_nodes else 1
    pair_keys = _unique_pair_keys(graph.edge_src, graph.edge_dst, base)

    all_t = np.concatenate([graph.edge_t, graph.node_t])
    num_unique_steps = int(np.unique(all_t).size) if all_t.size else 0

    surprise = None
    if split_time is not None:
        t_min, t_max = graph.t_min, graph.t_max
        if t_min is None or not (t_min <= split_time <= t_max):
            raise OutOfRangeError(
                f"split time {split_time} outside event range "
                f"[{t_min}, {t_max}]"
            )
        cut = lower_bound(graph, split_time)
        before = _unique_pair_keys(graph.edge_src[:cut], graph.edge_dst[:cut], base)
        after = _unique_pair_keys(graph.edge_src[cut:], graph.edge_dst[cut:], base)
        if after.size == 0:
            surprise = 0.0
        else:
            unseen = np.setdiff1d(after, before, assume_unique=True)
            surprise = float(unseen.size / after.size)

    return GraphStats(
        num_nodes=num_nodes,
        num_edges=graph.num_edges,
        num_node_events=graph.num_node_events,
        num_unique_edges=int(pair_keys.size),
        num_unique_steps=num_unique_steps,
        surprise=surprise,
    )
