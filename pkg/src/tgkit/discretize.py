"""Discretization: regroup a graph onto a coarser time granularity.

Events are bucketed by exact rational arithmetic anchored at the graph's
first event time, grouped into (bucket, src, dst) / (bucket, node)
equivalence classes, and each class is reduced to one representative event.

Two implementations live here on purpose: the vectorized engine path and
``discretize_naive``, a deliberately plain dictionary implementation kept
as the correctness oracle and benchmark baseline.
"""

from __future__ import annotations

import numpy as np

from tgkit.exceptions import (
    ExcludedGranularityError,
    GranularityOrderError,
    ReductionRequiresFeaturesError,
)
from tgkit.granularity import (
    ReductionOp,
    TimeGranularity,
    bucket_indices,
    ticks_between,
)
from tgkit.graph import BucketMapping, TemporalGraph


def _validate(
    graph: TemporalGraph, coarse: TimeGranularity, reduce: ReductionOp
) -> None:
    if graph.granularity.is_event_ordered:
        raise ExcludedGranularityError(
            "event-ordered graphs are excluded from time operations"
        )
    if coarse.is_event_ordered:
        raise ExcludedGranularityError(
            "cannot discretize to the event-ordered granularity"
        )
    # Raises GranularityOrderError when coarse is strictly finer.
    ticks_between(coarse, graph.granularity)
    if reduce.needs_features:
        if graph.num_edges and graph.edge_feat is None:
            raise ReductionRequiresFeaturesError(
                f"{reduce.value} reduction requires edge features"
            )
        if graph.num_node_events and graph.node_feat is None:
            raise ReductionRequiresFeaturesError(
                f"{reduce.value} reduction requires node-event features"
            )


def _reduce_groups(
    feat: np.ndarray | None,
    order: np.ndarray,
    starts: np.ndarray,
    sizes: np.ndarray,
    reduce: ReductionOp,
) -> np.ndarray | None:
    """Reduce each class of the grouped rows to one feature row.

    ``order`` lists event rows grouped by class; within a class rows keep
    native time order (stable sort), which is what FIRST/LAST select by.
    """
    if reduce is ReductionOp.COUNT:
        return sizes.astype(np.float64)[:, None]
    if feat is None:
        return None
    if reduce is ReductionOp.FIRST:
        return feat[order[starts]]
    if reduce is ReductionOp.LAST:
        return feat[order[starts + sizes - 1]]
    ordered = feat[order]
    if reduce in (ReductionOp.SUM, ReductionOp.MEAN):
        # np.add.at accumulates in input order, so class sums are exactly
        # the left-to-right sums over each class in time order.
        totals = np.zeros((starts.shape[0], feat.shape[1]), dtype=np.float64)
        group_ids = np.repeat(np.arange(starts.shape[0]), sizes)
        np.add.at(totals, group_ids, ordered)
        if reduce is ReductionOp.MEAN:
            totals = totals / sizes[:, None]
        return totals
    if reduce is ReductionOp.MAX:
        return np.maximum.reduceat(ordered, starts, axis=0)
    raise AssertionError(f"unhandled reduction {reduce}")


def _group(
    keys: list[np.ndarray],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Group rows by the key tuple, preserving input order within a class.

    Returns (order, starts, sizes): ``order`` lists row indices class by
    class, ``starts``/``sizes`` delimit each class within it.

    Fast path: when the key ranges fit, pack (keys..., row) into a single
    int64 whose low component is the row index; the packed keys are then
    unique, so one plain sort groups classes and keeps rows in input order
    at once. Otherwise fall back to a stable multi-key lexsort.
    """
    n = keys[0].shape[0]
    if n == 0:
        return (
            np.zeros(0, dtype=np.int64),
            np.zeros(0, dtype=np.int64),
            np.zeros(0, dtype=np.int64),
        )

    bases = [int(k.max()) + 1 for k in keys]
    span = n
    for b in bases:
        span *= b
    if span < 2**63:
        packed = keys[0].astype(np.int64)
        for key, base in zip(keys[1:], bases[1:]):
            packed = packed * base + key
        packed = packed * n + np.arange(n, dtype=np.int64)
        packed.sort()
        order = packed % n
        group_key = packed // n
        changed = np.empty(n, dtype=bool)
        changed[0] = True
        np.not_equal(group_key[1:], group_key[:-1], out=changed[1:])
    else:
        order = np.lexsort(tuple(reversed(keys)))
        changed = np.zeros(n, dtype=bool)
        changed[0] = True
        for key in keys:
            sorted_key = key[order]
            changed[1:] |= sorted_key[1:] != sorted_key[:-1]
    starts = np.flatnonzero(changed)
    sizes = np.diff(np.append(starts, n))
    return order, starts, sizes


def discretize(
    graph: TemporalGraph,
    coarse: TimeGranularity,
    reduce: ReductionOp = ReductionOp.LAST,
) -> TemporalGraph:
    """Map a graph to a coarser granularity, one event per equivalence class.

    Output timestamps are bucket indices ``k = floor((t - t_min) / ticks)``
    anchored at the graph's first event time; the output carries a
    ``bucket_mapping`` for converting indices back to source time. Edge
    events group by (k, src, dst) and node events by (k, node); each class
    reduces to one representative whose feature is ``reduce`` applied over
    the class in time order. Output rows are sorted by bucket with
    (src, dst) ascending inside a bucket.

    Raises:
        ExcludedGranularityError: Event-ordered source or target.
        GranularityOrderError: ``coarse`` finer than the native granularity.
        ReductionRequiresFeaturesError: Sum/Mean/Max on a featureless class.
    """
    _validate(graph, coarse, reduce)
    native = graph.granularity
    anchor = graph.t_min if graph.t_min is not None else 0

    edge_k = bucket_indices(graph.edge_t, anchor, native, coarse)
    order, starts, sizes = _group([edge_k, graph.edge_src, graph.edge_dst])
    reps = order[starts]
    out_edge_t = edge_k[reps]
    out_src = graph.edge_src[reps]
    out_dst = graph.edge_dst[reps]
    out_efeat = _reduce_groups(graph.edge_feat, order, starts, sizes, reduce)
    if graph.num_edges == 0:
        out_efeat = None

    node_k = bucket_indices(graph.node_t, anchor, native, coarse)
    norder, nstarts, nsizes = _group([node_k, graph.node_ids])
    nreps = norder[nstarts]
    out_node_t = node_k[nreps]
    out_nids = graph.node_ids[nreps]
    out_nfeat = _reduce_groups(graph.node_feat, norder, nstarts, nsizes, reduce)
    if graph.num_node_events == 0:
        out_nfeat = None

    return TemporalGraph.from_arrays(
        out_edge_t,
        out_src,
        out_dst,
        coarse,
        edge_feat=out_efeat,
        node_t=out_node_t,
        node_ids=out_nids,
        node_feat=out_nfeat,
        static_feats=graph.static_feats,
        bucket_mapping=BucketMapping(anchor, native),
        assume_sorted=True,
    )


def discretize_naive(
    graph: TemporalGraph,
    coarse: TimeGranularity,
    reduce: ReductionOp = ReductionOp.LAST,
) -> TemporalGraph:
    """Dictionary-based reference implementation of ``discretize``.

    Row-at-a-time hash grouping with sequential per-class reduction; kept
    independent of the vectorized path so the two can check each other,
    and used as the baseline in the discretization benchmark.
    """
    _validate(graph, coarse, reduce)
    native = graph.granularity
    anchor = graph.t_min if graph.t_min is not None else 0
    ratio = ticks_between(coarse, native)
    num, den = ratio.numerator, ratio.denominator

    def group_rows(ts, *id_cols):
        groups: dict[tuple, list[int]] = {}
        ts = ts.tolist()
        cols = [c.tolist() for c in id_cols]
        for i in range(len(ts)):
            k = (ts[i] - anchor) * den // num
            key = (k,) + tuple(c[i] for c in cols)
            groups.setdefault(key, []).append(i)
        return groups

    def reduce_rows(rows: list[int], feat: np.ndarray | None):
        if reduce is ReductionOp.COUNT:
            return [float(len(rows))]
        if feat is None:
            return None
        if reduce is ReductionOp.FIRST:
            return feat[rows[0]]
        if reduce is ReductionOp.LAST:
            return feat[rows[-1]]
        acc = feat[rows[0]].astype(np.float64).copy()
        for r in rows[1:]:
            if reduce is ReductionOp.MAX:
                acc = np.maximum(acc, feat[r])
            else:
                acc = acc + feat[r]
        if reduce is ReductionOp.MEAN:
            acc = acc / len(rows)
        return acc

    edge_groups = group_rows(graph.edge_t, graph.edge_src, graph.edge_dst)
    ek, es, ed, ef = [], [], [], []
    for key in sorted(edge_groups):
        k, s, d = key
        ek.append(k)
        es.append(s)
        ed.append(d)
        ef.append(reduce_rows(edge_groups[key], graph.edge_feat))
    edge_feat = None
    if graph.num_edges and (reduce is ReductionOp.COUNT or graph.edge_feat is not None):
        edge_feat = np.asarray(ef, dtype=np.float64)

    node_groups = group_rows(graph.node_t, graph.node_ids)
    nk, nn, nf = [], [], []
    for key in sorted(node_groups):
        k, node = key
        nk.append(k)
        nn.append(node)
        nf.append(reduce_rows(node_groups[key], graph.node_feat))
    node_feat = None
    if graph.num_node_events and (
        reduce is ReductionOp.COUNT or graph.node_feat is not None
    ):
        node_feat = np.asarray(nf, dtype=np.float64)

    return TemporalGraph.from_arrays(
        np.asarray(ek, dtype=np.int64),
        np.asarray(es, dtype=np.int64),
        np.asarray(ed, dtype=np.int64),
        coarse,
        edge_feat=edge_feat,
        node_t=np.asarray(nk, dtype=np.int64),
        node_ids=np.asarray(nn, dtype=np.int64),
        node_feat=node_feat,
        static_feats=graph.static_feats,
        bucket_mapping=BucketMapping(anchor, native),
        assume_sorted=True,
    )
