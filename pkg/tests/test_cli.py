import re

import pytest

from tgkit import DatasetManifest, load_csv
from tgkit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def strip_timing(text: str) -> str:
    return "\n".join(
        line for line in text.splitlines() if not line.startswith("# time:")
    )


def test_stats_tiny(capsys, fixtures_dir):
    code, out, _ = run(capsys, "stats", str(fixtures_dir / "tiny" / "tiny.toml"))
    assert code == 0
    assert "nodes: 4" in out
    assert "edges: 3" in out
    assert "unique_edges: 3" in out
    assert "unique_steps: 2" in out


def test_stats_with_split_prints_surprise(capsys, fixtures_dir):
    code, out, _ = run(
        capsys, "stats", str(fixtures_dir / "rich" / "rich.toml"),
        "--split", "0.70,0.15,0.15",
    )
    assert code == 0
    m = re.search(r"surprise: ([0-9.]+)", out)
    assert m and 0.0 <= float(m.group(1)) <= 1.0


def test_growth_labels_fixture(capsys, fixtures_dir):
    code, out, _ = run(
        capsys, "growth-labels", str(fixtures_dir / "growth" / "growth.toml"),
        "--granularity", "day",
    )
    assert code == 0
    assert "counts: 3 5 4" in out
    assert "labels: 1 0" in out


def test_discretize_writes_loadable_csv(capsys, fixtures_dir, tmp_path):
    out_csv = tmp_path / "hourly.csv"
    code, out, _ = run(
        capsys, "discretize", str(fixtures_dir / "rich" / "rich.toml"),
        "--granularity", "hour", "--reduce", "count", "--out", str(out_csv),
    )
    assert code == 0
    assert "buckets:" in out and "# time:" in out
    graph, _ = load_csv(DatasetManifest(edges=out_csv))
    assert graph.num_edges > 0
    assert float(graph.edge_feat.sum()) == 60.0  # counts partition the input


def test_split_writes_three_csvs(capsys, fixtures_dir, tmp_path):
    code, out, _ = run(
        capsys, "split", str(fixtures_dir / "rich" / "rich.toml"),
        "--out-dir", str(tmp_path),
    )
    assert code == 0
    sizes = {}
    for name in ("train", "val", "test"):
        graph, _ = load_csv(DatasetManifest(edges=tmp_path / f"{name}.csv"))
        sizes[name] = graph.num_edges
    assert sizes == {"train": 42, "val": 9, "test": 9}
    assert (tmp_path / "id_map.csv").exists()


def test_edgebank_with_manifest_negatives(capsys, fixtures_dir):
    code, out, _ = run(
        capsys, "edgebank", str(fixtures_dir / "rich" / "rich.toml"),
        "--batch-size", "4",
    )
    assert code == 0
    assert "val_mrr: n/a" in out  # file negatives cover the test split only
    m = re.search(r"test_mrr: ([0-9.]+)", out)
    assert m and 0.0 < float(m.group(1)) <= 1.0


def test_edgebank_uniform_deterministic(capsys, fixtures_dir):
    argv = ["edgebank", str(fixtures_dir / "rich" / "rich.toml"),
            "--uniform-negatives", "3", "--seed", "5"]
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert strip_timing(out1) == strip_timing(out2)
    assert "val_mrr: 0." in out1 or "val_mrr: 1." in out1


def test_bench_discretize_reports_speedup(capsys, fixtures_dir):
    code, out, _ = run(
        capsys, "bench-discretize", str(fixtures_dir / "rich" / "rich.toml"),
        "--granularity", "hour",
    )
    assert code == 0
    assert "outputs_match: yes" in out
    assert re.search(r"speedup: [0-9.]+", out)
    assert "# time: engine" in out and "# time: naive" in out


def test_plots_written(capsys, fixtures_dir, tmp_path):
    png1 = tmp_path / "growth.png"
    code, _, _ = run(
        capsys, "growth-labels", str(fixtures_dir / "growth" / "growth.toml"),
        "--granularity", "day", "--plot", str(png1),
    )
    assert code == 0 and png1.stat().st_size > 0

    png2 = tmp_path / "bench.png"
    code, _, _ = run(
        capsys, "bench-discretize", str(fixtures_dir / "tiny" / "tiny.toml"),
        "--granularity", "hour", "--plot", str(png2),
    )
    assert code == 0 and png2.stat().st_size > 0

    png3 = tmp_path / "rate.png"
    code, _, _ = run(
        capsys, "stats", str(fixtures_dir / "rich" / "rich.toml"),
        "--plot", str(png3),
    )
    assert code == 0 and png3.stat().st_size > 0


def test_data_error_exits_1(capsys, tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("edges = missing.csv\n")
    code, _, err = run(capsys, "stats", str(bad))
    assert code == 1
    assert "error:" in err


def test_validation_error_exits_1(capsys, fixtures_dir):
    # Granularity coarser than requested target -> data/validation error.
    code, _, err = run(
        capsys, "discretize", str(fixtures_dir / "tiny" / "tiny.toml"),
        "--granularity", "second", "--reduce", "sum", "--out", "/tmp/x.csv",
    )
    assert code == 1
    assert "error:" in err


def test_usage_error_exits_2(capsys, fixtures_dir):
    with pytest.raises(SystemExit) as exc:
        main(["discretize", str(fixtures_dir / "tiny" / "tiny.toml"),
              "--granularity", "fortnight", "--out", "/tmp/x.csv"])
    assert exc.value.code == 2


def test_missing_negatives_source_exits_2(capsys, fixtures_dir):
    code, _, err = run(
        capsys, "edgebank", str(fixtures_dir / "tiny" / "tiny.toml"),
    )
    assert code in (1, 2)  # tiny has no negatives entry and no flag given
    assert err
