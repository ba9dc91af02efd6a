"""Ranked-evaluation metrics and negative sampling.

All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from tgkit.exceptions import ExhaustionError, ValidationError


def mrr(pos_score: float, neg_scores: np.ndarray | Sequence[float]) -> float:
    """Reciprocal rank of the positive among the negatives, ties averaged.

    rank = 1 + #{negatives strictly greater} + #{negatives equal} / 2.
    Averaged ties make the all-equal case well defined: a positive tied
    with 100 zero-score negatives ranks 51.

    Raises:
        ValidationError: On non-finite scores.
    """
    neg = np.asarray(neg_scores, dtype=np.float64)
    if not math.isfinite(pos_score) or (neg.size and not np.all(np.isfinite(neg))):
        raise ValidationError("scores must be finite")
    rank = 1.0 + float((neg > pos_score).sum()) + float((neg == pos_score).sum()) / 2.0
    return 1.0 / rank


def ndcg_at_k(
    pred_scores: np.ndarray | Sequence[float],
    true_relevance: np.ndarray | Sequence[float],
    k: int,
) -> float:
    """Normalized discounted cumulative gain over the top-k predictions.

    Gain is linear relevance with discount 1 / log2(i + 1); the score is
    DCG of the predicted top-k divided by the ideal DCG, and 0 when the
    ideal DCG is 0 (all relevance zero). Prediction ties break by input
    position, so the result is deterministic.

    Raises:
        ValidationError: k = 0, length mismatch, or negative relevance.
    """
    if k <= 0:
        raise ValidationError(f"k must be >= 1, got {k}")
    pred = np.asarray(pred_scores, dtype=np.float64)
    rel = np.asarray(true_relevance, dtype=np.float64)
    if pred.shape != rel.shape or pred.ndim != 1:
        raise ValidationError("pred_scores and true_relevance must be equal-length 1D")
    if rel.size and rel.min() < 0:
        raise ValidationError("relevance must be non-negative")

    top = np.argsort(-pred, kind="stable")[:k]
    discounts = 1.0 / np.log2(np.arange(2, top.size + 2, dtype=np.float64))
    dcg = float((rel[top] * discounts).sum())
    ideal = np.sort(rel)[::-1][:k]
    idcg = float((ideal * discounts[: ideal.size]).sum())
    if idcg == 0.0:
        return 0.0
    return dcg / idcg


def growth_labels(snapshot_counts: np.ndarray | Sequence[int]) -> np.ndarray:
    """Binary labels: 1 where the next snapshot strictly grows.

    label[i] = 1 iff count[i+1] > count[i]; one label fewer than
    snapshots, so a single snapshot yields no labels.

    Raises:
        ValidationError: On an empty count sequence.
    """
    counts = np.asarray(snapshot_counts, dtype=np.int64)
    if counts.size == 0:
        raise ValidationError("need at least one snapshot")
    return (counts[1:] > counts[:-1]).astype(np.int64)


def sample_uniform_negatives(
    rng_seed,
    positives: tuple[np.ndarray, np.ndarray, np.ndarray],
    node_universe: np.ndarray | Sequence[int],
    q: int,
) -> np.ndarray:
    """Draw q negative destinations per positive, uniformly, reproducibly.

    Negatives come from the universe excluding each positive's true
    destination, without replacement. The same seed yields the same
    negatives.

    Args:
        rng_seed: Seed (int or sequence of ints) for the generator.
        positives: (src, dst, t) arrays; only dst participates.
        node_universe: Candidate destination ids.
        q: Negatives per positive.

    Returns:
        int64 array of shape [num_positives, q].

    Raises:
        ExhaustionError: q >= universe size.
    """
    universe = np.unique(np.asarray(node_universe, dtype=np.int64))
    if universe.size == 0:
        raise ValidationError("node universe must be non-empty")
    if q >= universe.size:
        raise ExhaustionError(
            f"cannot draw {q} negatives from a universe of {universe.size}"
        )
    _, dst, _ = positives
    dst = np.asarray(dst, dtype=np.int64)
    rng = np.random.default_rng(rng_seed)
    out = np.empty((dst.shape[0], q), dtype=np.int64)
    pos_idx = np.searchsorted(universe, dst)
    in_universe = (pos_idx < universe.size) & (
        universe[np.minimum(pos_idx, universe.size - 1)] == dst
    )
    for i in range(dst.shape[0]):
        if in_universe[i]:
            # Draw from the universe with the true destination removed by
            # index remapping.
            idx = rng.choice(universe.size - 1, size=q, replace=False)
            idx[idx >= pos_idx[i]] += 1
        else:
            idx = rng.choice(universe.size, size=q, replace=False)
        out[i] = universe[idx]
    return out
