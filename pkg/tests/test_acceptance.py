"""Acceptance suite: one test per criterion, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s``. The two dataset-bound
criteria run against real data when the environment points at it:

    TGKIT_WIKIPEDIA_MANIFEST  manifest for the Wikipedia edge export
                              (negatives entry supplies the precomputed
                              test negatives)
    TGKIT_TRADE_MANIFEST      manifest for the Trade export (node events
                              carry the yearly label vectors)

Without the data they fall back to the documented substitute checks.
"""

import os
import time

import numpy as np
import pytest

from tgkit import (
    EdgeBankMemory,
    GraphView,
    HookContract,
    RecencyBuffer,
    ReductionOp,
    TemporalGraph,
    TimeGranularity,
    chronological_split,
    discretize,
    discretize_naive,
    edgebank_predict,
    edgebank_update,
    evaluate_edgebank,
    evaluate_persistent_forecast,
    graph_stats,
    iterate_by_events,
    iterate_by_time,
    load_csv,
    load_negatives,
    mrr,
    ndcg_at_k,
    parse_manifest,
    recency_query,
    recency_update,
    resolve_split,
    validate_recipe,
)
from tgkit.exceptions import CyclicRecipeError, ExcludedGranularityError, MissingAttributeError
from tgkit.granularity import bucket_of

from test_hooks import brute_force_valid_order, random_contracts
from test_metrics import direct_dcg
from test_neighbors import RecencyOracle

S = TimeGranularity.SECOND


def report(name: str) -> None:
    print(f"ACCEPTANCE {name}: PASS")


def graph_columns(g: TemporalGraph):
    return (
        g.edge_t.tolist(), g.edge_src.tolist(), g.edge_dst.tolist(),
        None if g.edge_feat is None else g.edge_feat.tolist(),
        g.node_t.tolist(), g.node_ids.tolist(),
        None if g.node_feat is None else g.node_feat.tolist(),
    )


def test_discretization_oracle_equivalence_200_graphs():
    """200 random graphs, all six reductions, engine == naive, < 60 s."""
    rng = np.random.default_rng(2024)
    grans = [(S, TimeGranularity.HOUR), (S, TimeGranularity.DAY),
             (TimeGranularity.HOUR, TimeGranularity.DAY),
             (TimeGranularity.WEEK, TimeGranularity.MONTH)]
    start = time.perf_counter()
    for case in range(200):
        e = int(10 ** rng.uniform(0.5, 4.0))  # up to 10^4 events
        native, coarse = grans[case % len(grans)]
        t_max = 50 * coarse.tick_seconds // native.tick_seconds + 1
        t = np.sort(rng.integers(0, t_max, size=e))
        g = TemporalGraph.from_arrays(
            t,
            rng.integers(0, 12, size=e),
            rng.integers(0, 12, size=e),
            native,
            edge_feat=rng.normal(size=(e, 2)),
            node_t=np.sort(rng.integers(0, t_max, size=max(1, e // 3))),
            node_ids=rng.integers(0, 12, size=max(1, e // 3)),
            node_feat=rng.normal(size=(max(1, e // 3), 2)),
        )
        for op in ReductionOp:
            assert graph_columns(discretize(g, coarse, op)) == graph_columns(
                discretize_naive(g, coarse, op)
            ), (case, op)
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"oracle sweep took {elapsed:.1f}s"
    report(f"discretization-oracle-200-graphs ({elapsed:.1f}s)")


def test_discretization_relative_speedup_1p3m_events():
    """1.3e6 events: engine >= 10x the dictionary oracle and < 2 s."""
    rng = np.random.default_rng(7)
    e = 1_300_000
    t = np.sort(rng.integers(0, 30 * 86_400, size=e))
    g = TemporalGraph.from_arrays(
        t, rng.integers(0, 2000, size=e), rng.integers(0, 2000, size=e), S
    )
    start = time.perf_counter()
    engine_out = discretize(g, TimeGranularity.HOUR, ReductionOp.LAST)
    engine_s = time.perf_counter() - start

    start = time.perf_counter()
    naive_out = discretize_naive(g, TimeGranularity.HOUR, ReductionOp.LAST)
    naive_s = time.perf_counter() - start

    assert np.array_equal(engine_out.edge_t, naive_out.edge_t)
    assert np.array_equal(engine_out.edge_src, naive_out.edge_src)
    assert np.array_equal(engine_out.edge_dst, naive_out.edge_dst)
    assert engine_s < 2.0, f"engine took {engine_s:.2f}s"
    speedup = naive_s / engine_s
    assert speedup >= 10.0, f"speedup only {speedup:.1f}x"
    report(
        f"discretization-speedup ({speedup:.1f}x, engine {engine_s:.2f}s)"
    )


def test_recency_sampler_oracle_100k():
    """Streams up to 1e5 edges, k in {1,2,16,64}: exact oracle equality."""
    for k in (1, 2, 16, 64):
        rng = np.random.default_rng(k)
        e, nodes = 100_000, 500
        t = np.sort(rng.integers(0, 10**6, size=e))
        src = rng.integers(0, nodes, size=e)
        dst = rng.integers(0, nodes, size=e)
        rows = np.arange(e)
        buf = RecencyBuffer(num_nodes=nodes, capacity=k)
        oracle = RecencyOracle(k)
        for lo in range(0, e, 4000):
            hi = lo + 4000
            seeds = rng.integers(0, nodes, size=64)
            got = recency_query(buf, seeds, want=k).to_lists()
            assert got == oracle.query(seeds, k), f"k={k} batch at {lo}"
            recency_update(buf, src[lo:hi], dst[lo:hi], t[lo:hi], rows[lo:hi])
            oracle.update(src[lo:hi], dst[lo:hi], t[lo:hi], rows[lo:hi])
        final = recency_query(buf, np.arange(nodes), want=k).to_lists()
        assert final == oracle.query(np.arange(nodes), k)
    report("recency-sampler-oracle (1e5 edges, k in {1,2,16,64})")


def test_recipe_validation_1000_random_sets():
    """Feasibility agreement with brute force plus edge satisfaction."""
    rng = np.random.default_rng(4096)
    feasible = infeasible = 0
    for _ in range(1000):
        contracts = random_contracts(rng)
        oracle = brute_force_valid_order(contracts)
        try:
            recipe = validate_recipe(contracts)
        except (CyclicRecipeError, MissingAttributeError):
            assert oracle is None
            infeasible += 1
            continue
        assert oracle is not None
        feasible += 1
        pos = {idx: p for p, idx in enumerate(recipe.order)}
        for i, ci in enumerate(contracts):
            for j, cj in enumerate(contracts):
                if i != j and ci.produces & cj.requires:
                    assert pos[i] < pos[j]

    # The documented two-hook shape: the negatives producer always runs
    # before the sampler that requires them.
    sampler = HookContract(
        "recency-sampler", frozenset({"negatives"}), frozenset({"neighbors"})
    )
    evaluator = HookContract("eval", frozenset(), frozenset({"negatives"}))
    names = [c.name for c in validate_recipe([sampler, evaluator]).contracts]
    assert names == ["eval", "recency-sampler"]
    assert feasible and infeasible
    report(
        f"recipe-validation-1000 ({feasible} feasible, {infeasible} infeasible)"
    )


def test_iteration_partition_500_cases():
    """Random (graph, spec) cases: exact partition and interval bounds."""
    rng = np.random.default_rng(11)
    spans = [S, TimeGranularity.MINUTE, TimeGranularity.HOUR]
    for case in range(500):
        e = int(rng.integers(1, 800))
        t = np.sort(rng.integers(0, 20_000, size=e))
        g = TemporalGraph.from_arrays(
            t, rng.integers(0, 10, size=e), rng.integers(0, 10, size=e), S,
            node_t=np.sort(rng.integers(0, 20_000, size=e // 4)),
            node_ids=rng.integers(0, 10, size=e // 4),
            node_feat=np.ones((e // 4, 1)),
        )
        view = GraphView.full(g)
        if case % 2 == 0:
            batches = list(iterate_by_events(view, int(rng.integers(1, 64))))
        else:
            span = spans[case % len(spans)]
            batches = list(iterate_by_time(view, span))
            anchor = g.t_min
            for b in batches:
                lo, hi = b.interval
                assert np.all((b.time >= lo) & (b.time < hi))
                assert np.all((b.node_time >= lo) & (b.node_time < hi))
                for tt in b.time[:2].tolist():
                    assert bucket_of(tt, anchor, S, span) == b.index
        got_e = np.concatenate([b.edge_rows for b in batches]) if batches else []
        assert np.array_equal(got_e, np.arange(g.num_edges))
        got_n = sum(int(b.node_hi - b.node_lo) for b in batches)
        assert got_n == g.num_node_events

    g = TemporalGraph.from_arrays(
        np.arange(5), np.zeros(5), np.ones(5), TimeGranularity.EVENT_ORDERED
    )
    with pytest.raises(ExcludedGranularityError):
        list(iterate_by_time(GraphView.full(g), TimeGranularity.HOUR))
    report("iteration-partition-500")


WIKI_ENV = "TGKIT_WIKIPEDIA_MANIFEST"
TRADE_ENV = "TGKIT_TRADE_MANIFEST"


def test_edgebank_wikipedia_or_substitute():
    """Table-anchored MRR on real data; exact replay oracle otherwise."""
    path = os.environ.get(WIKI_ENV)
    if path:
        manifest = parse_manifest(path)
        graph, ids = load_csv(manifest)
        assert manifest.negatives is not None, "manifest must list negatives"
        negatives = load_negatives(manifest.negatives, ids)
        train, val, test = chronological_split(graph)
        start = time.perf_counter()
        result = evaluate_edgebank(
            train, val, test, batch_size=200, test_negatives=negatives
        )
        elapsed = time.perf_counter() - start
        assert elapsed < 300.0, f"single pass took {elapsed:.0f}s"
        assert result.test_mrr == pytest.approx(0.527, abs=0.02), result
        report(f"edgebank-wikipedia (test MRR {result.test_mrr:.3f})")
        return

    # Substitute: replay equality against an independent oracle, plus the
    # forced all-ties rank.
    rng = np.random.default_rng(17)
    mem = EdgeBankMemory()
    seen: list[tuple[int, int]] = []
    for _ in range(5000):
        s, d = int(rng.integers(0, 40)), int(rng.integers(0, 40))
        if rng.random() < 0.5:
            edgebank_update(mem, np.array([s]), np.array([d]))
            seen.append((s, d))
        else:
            got = edgebank_predict(mem, np.array([s]), np.array([d]))[0]
            assert got == (1.0 if (s, d) in set(seen) else 0.0)
    assert mrr(0.0, np.zeros(100)) == pytest.approx(1.0 / 51.0)
    report(f"edgebank-substitute (dataset absent; set {WIKI_ENV} to run full)")


def test_persistent_forecast_trade_or_substitute():
    """Table-anchored NDCG@10 on real data; permutation oracle otherwise."""
    path = os.environ.get(TRADE_ENV)
    if path:
        manifest = parse_manifest(path)
        graph, _ = load_csv(manifest)
        split = resolve_split(graph, (0.70, 0.15, 0.15))
        score = evaluate_persistent_forecast(graph, split.test_start, k=10)
        assert score == pytest.approx(0.855, abs=0.01), score
        report(f"persistent-forecast-trade (test NDCG@10 {score:.3f})")
        return

    import itertools

    for n in (4, 5, 6):
        rng = np.random.default_rng(n)
        rel = rng.integers(0, 4, size=n).astype(float)
        rel[0] += 0.5  # guarantee a nonzero ideal
        for k in range(1, n + 1):
            idcg = direct_dcg(sorted(rel, reverse=True)[:k])
            for perm in itertools.permutations(range(n)):
                pred = np.empty(n)
                for pos, item in enumerate(perm):
                    pred[item] = float(n - pos)
                want = direct_dcg([rel[i] for i in perm[:k]]) / idcg
                got = ndcg_at_k(pred, rel, k)
                assert got == pytest.approx(want, abs=1e-12)
    report(
        f"persistent-forecast-substitute (dataset absent; set {TRADE_ENV} "
        "to run full)"
    )


def test_stats_wikipedia_or_substitute():
    """Exact Wikipedia statistics line; hand-verified fixture otherwise."""
    path = os.environ.get(WIKI_ENV)
    if path:
        manifest = parse_manifest(path)
        graph, _ = load_csv(manifest)
        split = resolve_split(graph, (0.70, 0.15, 0.15))
        stats = graph_stats(graph, split_time=split.test_start)
        assert stats.num_nodes == 9_227
        assert stats.num_edges == 157_474
        assert stats.num_unique_edges == 18_257
        assert stats.num_unique_steps == 152_757
        assert stats.surprise == pytest.approx(0.108, abs=0.001)
        report(f"stats-wikipedia (surprise {stats.surprise:.4f})")
        return

    # Substitute: the whole stats pipeline on a synthetic graph whose
    # statistics are computed independently with plain Python sets.
    rng = np.random.default_rng(23)
    e = 20_000
    t = np.sort(rng.integers(0, 40_000, size=e))
    src = rng.integers(0, 300, size=e)
    dst = rng.integers(0, 300, size=e)
    g = TemporalGraph.from_arrays(t, src, dst, S)
    split = resolve_split(g, (0.70, 0.15, 0.15))
    stats = graph_stats(g, split_time=split.test_start)
    assert stats.num_nodes == len(set(src.tolist()) | set(dst.tolist()))
    assert stats.num_edges == e
    assert stats.num_unique_edges == len(set(zip(src.tolist(), dst.tolist())))
    assert stats.num_unique_steps == len(set(t.tolist()))
    before = {
        (int(s), int(d)) for s, d, tt in zip(src, dst, t) if tt < split.test_start
    }
    after = {
        (int(s), int(d)) for s, d, tt in zip(src, dst, t) if tt >= split.test_start
    }
    assert stats.surprise == pytest.approx(len(after - before) / len(after))
    report(f"stats-substitute (dataset absent; set {WIKI_ENV} to run full)")


def test_excluded_neural_tables_have_no_criterion():
    """GPU timings, profiler breakdowns, and neural metric tables are out
    of scope by design; nothing here depends on them."""
    report("excluded-neural-tables (no criterion, by design)")
