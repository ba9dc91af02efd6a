"""Non-neural baselines: edge memorization and persistent forecasting.

Both follow strict test-time information discipline: a batch is scored
before its events enter any memory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from tgkit.graph import TemporalGraph, Timestamp
from tgkit.loader import GraphView, iterate_by_events
from tgkit.metrics import mrr, ndcg_at_k, sample_uniform_negatives


class EdgeBankMemory:
    """Grow-only set of observed (src, dst) pairs (unlimited memory mode)."""

    def __init__(self) -> None:
        self.pairs: set[tuple[int, int]] = set()

    def __len__(self) -> int:
        return len(self.pairs)

    def reset(self) -> None:
        self.pairs.clear()


def edgebank_update(mem: EdgeBankMemory, src: np.ndarray, dst: np.ndarray) -> None:
    """Insert a batch of pairs; call after the batch has been scored."""
    mem.pairs.update(zip(np.asarray(src).tolist(), np.asarray(dst).tolist()))


def edgebank_predict(
    mem: EdgeBankMemory, src: np.ndarray, dst: np.ndarray
) -> np.ndarray:
    """Score 1.0 for pairs seen before, else 0.0."""
    pairs = mem.pairs
    return np.fromiter(
        ((s, d) in pairs for s, d in zip(np.asarray(src).tolist(), np.asarray(dst).tolist())),
        dtype=np.float64,
        count=len(np.asarray(src)),
    )


class LabelStream:
    """Per-node time-sorted label history for node property prediction."""

    def __init__(
        self, node_t: np.ndarray, node_ids: np.ndarray, labels: np.ndarray
    ):
        node_t = np.asarray(node_t, dtype=np.int64)
        node_ids = np.asarray(node_ids, dtype=np.int64)
        labels = np.asarray(labels, dtype=np.float64)
        num_nodes = int(node_ids.max()) + 1 if node_ids.size else 0
        order = np.lexsort((np.arange(node_t.shape[0]), node_t, node_ids))
        self.ts = node_t[order]
        self.labels = labels[order]
        self.dim = labels.shape[1] if labels.ndim == 2 else 0
        self.indptr = np.zeros(num_nodes + 1, dtype=np.int64)
        if node_ids.size:
            counts = np.bincount(node_ids, minlength=num_nodes)
            self.indptr[1:] = np.cumsum(counts)

    @classmethod
    def from_graph(cls, graph: TemporalGraph) -> LabelStream:
        if graph.node_feat is None:
            raise ValueError("graph has no node-event features to forecast")
        return cls(graph.node_t, graph.node_ids, graph.node_feat)


def persistent_forecast(
    history: LabelStream, node: int, t: Timestamp
) -> np.ndarray:
    """The node's most recent label strictly before t; zeros if none."""
    if node < 0 or node + 1 >= history.indptr.shape[0]:
        return np.zeros(history.dim, dtype=np.float64)
    lo, hi = int(history.indptr[node]), int(history.indptr[node + 1])
    cut = lo + int(np.searchsorted(history.ts[lo:hi], t, side="left"))
    if cut == lo:
        return np.zeros(history.dim, dtype=np.float64)
    return history.labels[cut - 1]


@dataclass(frozen=True)
class EdgeBankResult:
    val_mrr: float | None
    test_mrr: float | None
    num_val: int
    num_test: int


def _negatives_for_view(
    view: GraphView, q: int, rng_seed, universe: np.ndarray
) -> list[np.ndarray]:
    lo, hi = view.edge_range
    g = view.graph
    negs = sample_uniform_negatives(
        rng_seed,
        (g.edge_src[lo:hi], g.edge_dst[lo:hi], g.edge_t[lo:hi]),
        universe,
        q,
    )
    return [negs[i] for i in range(negs.shape[0])]


def _edgebank_pass(
    mem: EdgeBankMemory,
    view: GraphView,
    negatives: Sequence[np.ndarray] | None,
    batch_size: int,
) -> tuple[float | None, int]:
    """Score a split one batch at a time, updating memory afterwards."""
    ranks: list[float] = []
    offset = 0
    for sl in iterate_by_events(view, batch_size):
        src, dst = sl.src, sl.dst
        pos_scores = edgebank_predict(mem, src, dst)
        if negatives is not None:
            for i in range(src.shape[0]):
                negs = negatives[offset + i]
                neg_scores = edgebank_predict(
                    mem, np.full(negs.shape[0], src[i]), negs
                )
                ranks.append(mrr(float(pos_scores[i]), neg_scores))
        offset += src.shape[0]
        edgebank_update(mem, src, dst)
    if negatives is None:
        return None, offset
    return (float(np.mean(ranks)) if ranks else None), offset


def evaluate_edgebank(
    train: GraphView,
    val: GraphView,
    test: GraphView,
    batch_size: int = 200,
    test_negatives: Sequence[np.ndarray] | None = None,
    uniform_q: int | None = None,
    rng_seed: int = 0,
    universe: np.ndarray | None = None,
) -> EdgeBankResult:
    """One-vs-many link prediction with the edge-memorization baseline.

    Memory starts from the train split; each later batch is scored before
    it is memorized. Negatives come either from ``test_negatives``
    (aligned to test positives; validation is then skipped) or uniformly
    with ``uniform_q`` per positive.
    """
    if test_negatives is None and uniform_q is None:
        raise ValueError("provide test_negatives or uniform_q")
    if universe is None:
        universe = np.unique(train.graph.edge_dst)

    mem = EdgeBankMemory()
    lo, hi = train.edge_range
    edgebank_update(mem, train.graph.edge_src[lo:hi], train.graph.edge_dst[lo:hi])

    val_negs = None
    if uniform_q is not None:
        val_negs = _negatives_for_view(val, uniform_q, (rng_seed, 1), universe)
    val_mrr, num_val = _edgebank_pass(mem, val, val_negs, batch_size)

    if test_negatives is not None:
        test_negs: Sequence[np.ndarray] = test_negatives
        if len(test_negs) != test.num_edges:
            raise ValueError(
                f"got {len(test_negs)} negative rows for {test.num_edges} "
                "test positives"
            )
        lo, hi = test.edge_range
        for i, row in enumerate(test_negs):
            if bool(np.any(np.asarray(row) == test.graph.edge_dst[lo + i])):
                raise ValueError(
                    f"negatives row {i} contains its positive destination"
                )
    else:
        test_negs = _negatives_for_view(test, uniform_q, (rng_seed, 2), universe)
    test_mrr, num_test = _edgebank_pass(mem, test, test_negs, batch_size)

    return EdgeBankResult(val_mrr, test_mrr, num_val, num_test)


def evaluate_persistent_forecast(
    graph: TemporalGraph, test_start: Timestamp, k: int = 10
) -> float:
    """Mean NDCG@k of the persistence baseline over test node events.

    For every node event at t >= test_start, predict the node's most
    recent label strictly before t (full history visible, strict cut) and
    rank it against the true label.
    """
    history = LabelStream.from_graph(graph)
    cut = int(np.searchsorted(graph.node_t, test_start, side="left"))
    scores = []
    for i in range(cut, graph.num_node_events):
        node, t = int(graph.node_ids[i]), int(graph.node_t[i])
        pred = persistent_forecast(history, node, t)
        scores.append(ndcg_at_k(pred, graph.node_feat[i], k))
    if not scores:
        raise ValueError("no node events at or after test_start")
    return float(np.mean(scores))
