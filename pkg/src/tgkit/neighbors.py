"""Temporal neighborhood queries.

Two samplers: a streaming recency sampler over per-node ring buffers (the
k most recent interactions per node), and a uniform historical sampler over
a per-node time-sorted adjacency built once from a graph. Both treat edges
as undirected for neighbor purposes and answer duplicated seeds from a
single lookup.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tgkit.exceptions import CapacityError, StreamOrderError, ValidationError
from tgkit.graph import TemporalGraph, Timestamp

PAD = -1


@dataclass(frozen=True)
class Neighbors:
    """Per-seed neighbor lists as padded arrays, newest slots first.

    ``ids``/``times``/``rows`` have shape [num_seeds, want]; entries past
    ``counts[i]`` are PAD (-1). ``to_lists`` unpads for small-scale checks.
    """

    ids: np.ndarray
    times: np.ndarray
    rows: np.ndarray
    counts: np.ndarray

    def to_lists(self) -> list[list[tuple[int, int, int]]]:
        out = []
        for i in range(self.ids.shape[0]):
            c = int(self.counts[i])
            out.append(
                [
                    (int(self.ids[i, j]), int(self.times[i, j]), int(self.rows[i, j]))
                    for j in range(c)
                ]
            )
        return out


class RecencyBuffer:
    """Per-node ring buffers of the k most recently inserted neighbors.

    Insertions must arrive in non-decreasing time order (stream
    discipline); at capacity the oldest entry is overwritten.
    """

    def __init__(self, num_nodes: int, capacity: int):
        if capacity < 1:
            raise ValidationError(f"capacity must be >= 1, got {capacity}")
        self.num_nodes = num_nodes
        self.capacity = capacity
        self._nbr = np.full((num_nodes, capacity), PAD, dtype=np.int64)
        self._time = np.full((num_nodes, capacity), PAD, dtype=np.int64)
        self._row = np.full((num_nodes, capacity), PAD, dtype=np.int64)
        self._cursor = np.zeros(num_nodes, dtype=np.int64)
        self._fill = np.zeros(num_nodes, dtype=np.int64)
        self._max_t = -1

    def reset(self) -> None:
        """Restore the post-construction state (all buffers empty)."""
        self._nbr.fill(PAD)
        self._time.fill(PAD)
        self._row.fill(PAD)
        self._cursor.fill(0)
        self._fill.fill(0)
        self._max_t = -1


def recency_update(
    buf: RecencyBuffer,
    src: np.ndarray,
    dst: np.ndarray,
    t: np.ndarray,
    rows: np.ndarray,
) -> None:
    """Insert a batch of edges into the ring buffers, both directions.

    For each edge, (dst, t, row) is inserted into src's buffer and
    (src, t, row) into dst's; insertion order follows the batch.

    Raises:
        StreamOrderError: If the batch starts before the most recently
            inserted timestamp or is internally unsorted.
    """
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    t = np.asarray(t, dtype=np.int64)
    rows = np.asarray(rows, dtype=np.int64)
    if src.size == 0:
        return
    if int(t[0]) < buf._max_t or np.any(np.diff(t) < 0):
        raise StreamOrderError(
            f"batch timestamps regress below {buf._max_t} (stream discipline)"
        )
    if max(int(src.max()), int(dst.max())) >= buf.num_nodes:
        raise ValidationError("edge endpoint id exceeds buffer node range")

    b = src.shape[0]
    # Edge-major interleave keeps per-node insertions in batch order.
    seeds = np.empty(2 * b, dtype=np.int64)
    vals = np.empty(2 * b, dtype=np.int64)
    seeds[0::2], seeds[1::2] = src, dst
    vals[0::2], vals[1::2] = dst, src
    ts = np.repeat(t, 2)
    rws = np.repeat(rows, 2)

    order = np.argsort(seeds, kind="stable")
    ss = seeds[order]
    group_first = np.r_[0, np.flatnonzero(ss[1:] != ss[:-1]) + 1]
    group_sizes = np.diff(np.r_[group_first, ss.shape[0]])
    group_id = np.cumsum(np.r_[0, (ss[1:] != ss[:-1]).astype(np.int64)])
    rank_sorted = np.arange(ss.shape[0]) - group_first[group_id]
    size_sorted = group_sizes[group_id]

    k = buf.capacity
    keep = rank_sorted >= size_sorted - k
    nodes_kept = ss[keep]
    pos = (buf._cursor[nodes_kept] + rank_sorted[keep]) % k
    sel = order[keep]
    buf._nbr[nodes_kept, pos] = vals[sel]
    buf._time[nodes_kept, pos] = ts[sel]
    buf._row[nodes_kept, pos] = rws[sel]

    touched = ss[group_first]
    buf._cursor[touched] = (buf._cursor[touched] + group_sizes) % k
    buf._fill[touched] = np.minimum(k, buf._fill[touched] + group_sizes)
    buf._max_t = int(t[-1])


def recency_query(
    buf: RecencyBuffer,
    seeds: np.ndarray,
    want: int,
    cut_time: Timestamp | None = None,
) -> Neighbors:
    """The most recent stored neighbors per seed, newest first.

    Each seed yields its min(want, fill) most recent entries; duplicate
    seeds are resolved by one buffer read and fanned out. With
    ``cut_time``, entries at or after the cut are dropped (temporal
    causality for prediction-time queries).

    Raises:
        CapacityError: If want exceeds the buffer capacity.
    """
    if want > buf.capacity:
        raise CapacityError(
            f"want {want} exceeds buffer capacity {buf.capacity}"
        )
    seeds = np.asarray(seeds, dtype=np.int64)
    if seeds.size and int(seeds.max()) >= buf.num_nodes:
        raise ValidationError("seed id exceeds buffer node range")
    uniq, inverse = np.unique(seeds, return_inverse=True)
    u = uniq.shape[0]
    if u == 0:
        empty = np.zeros((0, want), dtype=np.int64)
        return Neighbors(empty, empty.copy(), empty.copy(), np.zeros(0, np.int64))

    j = np.arange(want, dtype=np.int64)
    pos = (buf._cursor[uniq][:, None] - 1 - j[None, :]) % buf.capacity
    take = np.minimum(buf._fill[uniq], want)
    valid = j[None, :] < take[:, None]
    ids = np.where(valid, buf._nbr[uniq[:, None], pos], PAD)
    times = np.where(valid, buf._time[uniq[:, None], pos], PAD)
    rows = np.where(valid, buf._row[uniq[:, None], pos], PAD)

    if cut_time is not None:
        # Newest-first times are non-increasing, so entries at/after the
        # cut form a prefix; compact the survivors left.
        valid &= times < cut_time
        shift = np.argsort(~valid, axis=1, kind="stable")
        ids = np.take_along_axis(ids, shift, axis=1)
        times = np.take_along_axis(times, shift, axis=1)
        rows = np.take_along_axis(rows, shift, axis=1)
        take = valid.sum(axis=1)
        refill = np.arange(want)[None, :] < take[:, None]
        ids = np.where(refill, ids, PAD)
        times = np.where(refill, times, PAD)
        rows = np.where(refill, rows, PAD)

    return Neighbors(
        ids[inverse], times[inverse], rows[inverse], take[inverse].astype(np.int64)
    )


class TemporalAdjacency:
    """Per-node time-sorted neighbor index built once from a graph.

    Immutable after construction; concurrent queries are safe. Each edge
    contributes entries in both directions, so the index holds
    2 * num_edges entries total.
    """

    def __init__(self, graph: TemporalGraph):
        num_nodes = graph.num_nodes
        e = graph.num_edges
        seeds = np.concatenate([graph.edge_src, graph.edge_dst])
        nbrs = np.concatenate([graph.edge_dst, graph.edge_src])
        ts = np.concatenate([graph.edge_t, graph.edge_t])
        rows = np.tile(np.arange(e, dtype=np.int64), 2)
        order = np.lexsort((rows, ts, seeds))
        self.num_nodes = num_nodes
        self.nbr = nbrs[order]
        self.ts = ts[order]
        self.row = rows[order]
        self.indptr = np.zeros(num_nodes + 1, dtype=np.int64)
        if seeds.size:
            counts = np.bincount(seeds, minlength=num_nodes)
            self.indptr[1:] = np.cumsum(counts)

    def candidates_before(self, node: int, t: Timestamp) -> tuple[int, int]:
        """Index range of the node's entries strictly before time t."""
        lo, hi = int(self.indptr[node]), int(self.indptr[node + 1])
        cut = lo + int(np.searchsorted(self.ts[lo:hi], t, side="left"))
        return lo, cut


def _sample_one(
    adj: TemporalAdjacency, node: int, t: int, want: int, rng_seed: int
) -> np.ndarray:
    """Positions of sampled entries for one (node, cut-time), newest first."""
    lo, cut = adj.candidates_before(node, t)
    c = cut - lo
    if c <= 0:
        return np.zeros(0, dtype=np.int64)
    if c <= want:
        picked = np.arange(c, dtype=np.int64)
    else:
        rng = np.random.default_rng((rng_seed, node, t))
        picked = rng.choice(c, size=want, replace=False)
    picked = np.sort(picked)[::-1]
    return lo + picked


def uniform_query(
    adj: TemporalAdjacency,
    seeds: np.ndarray,
    t: Timestamp,
    want: int,
    rng_seed: int,
) -> Neighbors:
    """Sample up to ``want`` neighbors per seed uniformly from its history.

    Candidates are the seed's adjacency entries with timestamp strictly
    before ``t``; sampling is without replacement and deterministic given
    ``rng_seed``. When candidates fit, all are returned in time-descending
    order. Sampling is independent per (node, cut-time), so duplicate
    seeds get identical lists.
    """
    seeds = np.asarray(seeds, dtype=np.int64)
    ts = np.full(seeds.shape[0], int(t), dtype=np.int64)
    return _uniform_at(adj, seeds, ts, want, rng_seed)


def _uniform_at(
    adj: TemporalAdjacency,
    seeds: np.ndarray,
    ts: np.ndarray,
    want: int,
    rng_seed: int,
) -> Neighbors:
    if want < 1:
        raise ValidationError(f"want must be >= 1, got {want}")
    n = seeds.shape[0]
    ids = np.full((n, want), PAD, dtype=np.int64)
    times = np.full((n, want), PAD, dtype=np.int64)
    rows = np.full((n, want), PAD, dtype=np.int64)
    counts = np.zeros(n, dtype=np.int64)
    memo: dict[tuple[int, int], np.ndarray] = {}
    for i in range(n):
        key = (int(seeds[i]), int(ts[i]))
        positions = memo.get(key)
        if positions is None:
            positions = _sample_one(adj, key[0], key[1], want, rng_seed)
            memo[key] = positions
        c = positions.shape[0]
        counts[i] = c
        ids[i, :c] = adj.nbr[positions]
        times[i, :c] = adj.ts[positions]
        rows[i, :c] = adj.row[positions]
    return Neighbors(ids, times, rows, counts)


@dataclass(frozen=True)
class NeighborLayer:
    """One hop of a multi-hop query; ``parent`` indexes the previous layer
    (or the seed array for the first hop)."""

    parent: np.ndarray
    ids: np.ndarray
    times: np.ndarray
    rows: np.ndarray


def multihop_query(
    adj: TemporalAdjacency,
    seeds: np.ndarray,
    t: Timestamp,
    fanouts: list[int],
    rng_seed: int,
) -> list[NeighborLayer]:
    """Layered temporal neighborhood expansion.

    Hop 1 samples each seed's history strictly before ``t``; hop h samples
    each hop-(h-1) neighbor's history strictly before that neighbor's own
    interaction time, preserving the chronologically-before constraint
    recursively.
    """
    if not fanouts:
        raise ValidationError("fanouts must be non-empty")
    seeds = np.asarray(seeds, dtype=np.int64)
    layers: list[NeighborLayer] = []
    frontier_nodes = seeds
    frontier_ts = np.full(seeds.shape[0], int(t), dtype=np.int64)
    for fanout in fanouts:
        res = _uniform_at(adj, frontier_nodes, frontier_ts, fanout, rng_seed)
        parent = np.repeat(np.arange(frontier_nodes.shape[0]), res.counts)
        flat = res.counts.sum()
        ids = np.zeros(int(flat), dtype=np.int64)
        times = np.zeros(int(flat), dtype=np.int64)
        rows = np.zeros(int(flat), dtype=np.int64)
        k = 0
        for i in range(frontier_nodes.shape[0]):
            c = int(res.counts[i])
            ids[k : k + c] = res.ids[i, :c]
            times[k : k + c] = res.times[i, :c]
            rows[k : k + c] = res.rows[i, :c]
            k += c
        layers.append(NeighborLayer(parent, ids, times, rows))
        frontier_nodes = ids
        frontier_ts = times
    return layers
