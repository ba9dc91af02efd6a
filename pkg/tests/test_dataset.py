import numpy as np
import pytest

from tgkit import (
    DatasetManifest,
    TemporalGraph,
    TimeGranularity,
    chronological_split,
    load_csv,
    load_negatives,
    parse_manifest,
    resolve_split,
    write_events_csv,
)
from tgkit.exceptions import (
    DegenerateSplitError,
    RowParseError,
    SchemaError,
    ValidationError,
)

S = TimeGranularity.SECOND


def manifest_for(tmp_path, csv_text, **kwargs):
    edges = tmp_path / "edges.csv"
    edges.write_text(csv_text)
    return DatasetManifest(edges=edges, **kwargs)


def test_first_appearance_id_assignment(tmp_path):
    m = manifest_for(tmp_path, "src,dst,t\nu1,i1,5\nu2,i1,7\nu1,i2,7\n")
    graph, ids = load_csv(m)
    assert len(ids) == 4
    assert [ids.to_id[x] for x in ("u1", "i1", "u2", "i2")] == [0, 1, 2, 3]
    assert graph.num_edges == 3
    assert graph.edge_src.tolist() == [0, 2, 0]
    assert graph.edge_dst.tolist() == [1, 1, 3]
    assert graph.edge_t.tolist() == [5, 7, 7]


def test_missing_column_names_it(tmp_path):
    m = manifest_for(tmp_path, "source,dst,t\na,b,1\n")
    with pytest.raises(SchemaError) as exc:
        load_csv(m)
    assert "src" in str(exc.value)


def test_bad_timestamp_reports_line(tmp_path):
    m = manifest_for(tmp_path, "src,dst,t\na,b,1\na,b,oops\n")
    with pytest.raises(RowParseError) as exc:
        load_csv(m)
    assert exc.value.line_no == 3


def test_bad_feature_reports_line(tmp_path):
    m = manifest_for(tmp_path, "src,dst,t,w\na,b,1,0.5\na,b,2,zzz\n")
    with pytest.raises(RowParseError) as exc:
        load_csv(m)
    assert exc.value.line_no == 3


def test_custom_column_mapping(tmp_path):
    m = manifest_for(
        tmp_path,
        "from,to,when,x\na,b,3,1.5\n",
        src_col="from", dst_col="to", t_col="when",
    )
    graph, _ = load_csv(m)
    assert graph.edge_t.tolist() == [3]
    assert graph.edge_feat.tolist() == [[1.5]]


def test_manifest_parse_and_paths(fixtures_dir):
    m = parse_manifest(fixtures_dir / "rich" / "rich.toml")
    assert m.edges.name == "edges.csv"
    assert m.node_events is not None
    assert m.granularity is S
    graph, ids = load_csv(m)
    assert graph.num_edges == 60
    assert graph.num_node_events == 10
    assert graph.static_feats.shape[0] == graph.num_nodes


def test_manifest_unknown_key(tmp_path):
    p = tmp_path / "m.toml"
    p.write_text("edges = edges.csv\nbogus = 1\n")
    with pytest.raises(SchemaError):
        parse_manifest(p)


def test_manifest_requires_edges(tmp_path):
    p = tmp_path / "m.toml"
    p.write_text("granularity = second\n")
    with pytest.raises(SchemaError):
        parse_manifest(p)


def test_negatives_loading(fixtures_dir):
    m = parse_manifest(fixtures_dir / "rich" / "rich.toml")
    _, ids = load_csv(m)
    negs = load_negatives(m.negatives, ids)
    assert len(negs) == 9
    assert all(len(row) == 3 for row in negs)


def test_negatives_unknown_label(tmp_path, fixtures_dir):
    m = parse_manifest(fixtures_dir / "rich" / "rich.toml")
    _, ids = load_csv(m)
    bad = tmp_path / "neg.txt"
    bad.write_text("v0 not-a-node\n")
    with pytest.raises(RowParseError):
        load_negatives(bad, ids)


def test_static_features_missing_node(tmp_path):
    edges = tmp_path / "edges.csv"
    edges.write_text("src,dst,t\na,b,1\n")
    static = tmp_path / "static.csv"
    static.write_text("node,s0\na,0.5\n")
    m = DatasetManifest(edges=edges, static_features=static)
    with pytest.raises(ValidationError):
        load_csv(m)


def columns(g: TemporalGraph):
    return (
        g.edge_t.tolist(),
        g.edge_src.tolist(),
        g.edge_dst.tolist(),
        None if g.edge_feat is None else g.edge_feat.tolist(),
    )


def test_round_trip_identity_on_sorted_fixture(tmp_path, fixtures_dir):
    m = parse_manifest(fixtures_dir / "rich" / "rich.toml")
    g1, ids1 = load_csv(m)
    out = tmp_path / "written.csv"
    write_events_csv(g1, out, ids=ids1)
    g2, ids2 = load_csv(DatasetManifest(edges=out))
    assert columns(g1) == columns(g2)
    assert ids1.labels == ids2.labels


def test_round_trip_stable_after_first_write(tmp_path):
    # An unsorted input settles into canonical form after one round trip.
    m = manifest_for(tmp_path, "src,dst,t\nx,y,9\na,b,1\nx,b,9\n")
    g1, ids1 = load_csv(m)
    first = tmp_path / "first.csv"
    write_events_csv(g1, first, ids=ids1)
    g2, ids2 = load_csv(DatasetManifest(edges=first))
    second = tmp_path / "second.csv"
    write_events_csv(g2, second, ids=ids2)
    assert first.read_text() == second.read_text()


def test_split_exact_sizes_on_distinct_timestamps():
    t = np.arange(100, dtype=np.int64)
    g = TemporalGraph.from_arrays(t, t % 5, (t + 1) % 5, S)
    train, val, test = chronological_split(g, (0.70, 0.15, 0.15))
    assert (train.num_edges, val.num_edges, test.num_edges) == (70, 15, 15)


def test_split_single_timestamp_degenerate():
    t = np.full(50, 7, dtype=np.int64)
    g = TemporalGraph.from_arrays(t, np.zeros(50), np.ones(50), S)
    with pytest.raises(DegenerateSplitError):
        chronological_split(g)


def test_split_ratio_validation():
    t = np.arange(10, dtype=np.int64)
    g = TemporalGraph.from_arrays(t, t % 2, (t + 1) % 2, S)
    with pytest.raises(ValidationError):
        chronological_split(g, (0.5, 0.5, 0.5))
    with pytest.raises(ValidationError):
        chronological_split(g, (1.0, -0.5, 0.5))


def test_split_chronological_invariant_random():
    rng = np.random.default_rng(0)
    for _ in range(50):
        e = int(rng.integers(20, 400))
        t = np.sort(rng.integers(0, max(4, e // 2), size=e))
        g = TemporalGraph.from_arrays(
            t, rng.integers(0, 9, size=e), rng.integers(0, 9, size=e), S
        )
        try:
            train, val, test = chronological_split(g)
        except DegenerateSplitError:
            continue
        assert train.num_edges and val.num_edges and test.num_edges
        t_arr = g.edge_t
        assert int(t_arr[train.edge_range[1] - 1]) < int(t_arr[val.edge_range[0]])
        assert int(t_arr[val.edge_range[1] - 1]) < int(t_arr[test.edge_range[0]])
        # Sizes stay within one timestamp group of the ratio targets.
        _, counts = np.unique(t_arr, return_counts=True)
        max_group = int(counts.max())
        assert abs(train.num_edges - 0.7 * e) <= max_group
        assert abs((train.num_edges + val.num_edges) - 0.85 * e) <= max_group


def test_split_boundaries_in_spec():
    t = np.arange(100, dtype=np.int64)
    g = TemporalGraph.from_arrays(t, t % 5, (t + 1) % 5, S)
    spec = resolve_split(g, (0.70, 0.15, 0.15))
    assert spec.val_start == 70
    assert spec.test_start == 85


def test_split_partitions_node_events(tmp_path, fixtures_dir):
    m = parse_manifest(fixtures_dir / "rich" / "rich.toml")
    g, _ = load_csv(m)
    train, val, test = chronological_split(g)
    total = sum(v.num_node_events for v in (train, val, test))
    assert total == g.num_node_events
