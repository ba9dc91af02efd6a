from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from tgkit import TemporalGraph, TimeGranularity

FIXTURES = Path(__file__).parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def random_graph(
    rng: np.random.Generator,
    max_events: int = 1000,
    num_nodes: int = 20,
    feat_dim: int | None = 2,
    with_node_events: bool = False,
    granularity: TimeGranularity = TimeGranularity.SECOND,
    t_max: int = 10_000,
) -> TemporalGraph:
    """Random sorted graph for property tests; duplicates timestamps often."""
    e = int(rng.integers(1, max_events + 1))
    edge_t = np.sort(rng.integers(0, t_max, size=e))
    src = rng.integers(0, num_nodes, size=e)
    dst = rng.integers(0, num_nodes, size=e)
    feat = rng.normal(size=(e, feat_dim)) if feat_dim else None
    node_t = node_ids = node_feat = None
    if with_node_events:
        m = int(rng.integers(1, max(2, e // 2)))
        node_t = np.sort(rng.integers(0, t_max, size=m))
        node_ids = rng.integers(0, num_nodes, size=m)
        node_feat = rng.normal(size=(m, feat_dim if feat_dim else 1))
    return TemporalGraph.from_arrays(
        edge_t,
        src,
        dst,
        granularity,
        edge_feat=feat,
        node_t=node_t,
        node_ids=node_ids,
        node_feat=node_feat,
    )
