"""CSV ingestion, dataset manifests, and chronological splits.

The edge CSV format: UTF-8, comma-separated, header row, no quoting of
numeric fields. Required columns are the manifest-declared src/dst/t
columns; every remaining declared column is a feature. Node labels are
arbitrary strings mapped to dense ids in first-appearance order.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from tgkit.exceptions import (
    DegenerateSplitError,
    RowParseError,
    SchemaError,
    ValidationError,
)
from tgkit.granularity import TimeGranularity
from tgkit.graph import TemporalGraph, Timestamp
from tgkit.loader import GraphView

MANIFEST_KEYS = {
    "edges",
    "node_events",
    "static_features",
    "negatives",
    "granularity",
    "src_col",
    "dst_col",
    "t_col",
}


@dataclass(frozen=True)
class DatasetManifest:
    """Declarative description of one dataset on disk.

    Stored as ``key = value`` lines; relative paths resolve against the
    manifest's own directory.
    """

    edges: Path
    granularity: TimeGranularity = TimeGranularity.SECOND
    node_events: Path | None = None
    static_features: Path | None = None
    negatives: Path | None = None
    src_col: str = "src"
    dst_col: str = "dst"
    t_col: str = "t"


def parse_manifest(path: str | Path) -> DatasetManifest:
    """Read a ``key = value`` manifest file.

    Raises:
        SchemaError: Unknown key or missing required ``edges`` entry.
    """
    path = Path(path)
    fields: dict[str, str] = {}
    for line_no, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise RowParseError(line_no, f"expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in MANIFEST_KEYS:
            raise SchemaError(f"unknown manifest key '{key}'")
        fields[key] = value
    if "edges" not in fields:
        raise SchemaError("manifest missing required key 'edges'")

    def resolve(key: str) -> Path | None:
        if key not in fields:
            return None
        return (path.parent / fields[key]).resolve()

    return DatasetManifest(
        edges=resolve("edges"),
        granularity=TimeGranularity.from_string(fields.get("granularity", "second")),
        node_events=resolve("node_events"),
        static_features=resolve("static_features"),
        negatives=resolve("negatives"),
        src_col=fields.get("src_col", "src"),
        dst_col=fields.get("dst_col", "dst"),
        t_col=fields.get("t_col", "t"),
    )


class IdMap:
    """String label to dense id mapping, assigned in first-appearance order."""

    def __init__(self) -> None:
        self.to_id: dict[str, int] = {}
        self.labels: list[str] = []

    def intern(self, label: str) -> int:
        idx = self.to_id.get(label)
        if idx is None:
            idx = len(self.labels)
            self.to_id[label] = idx
            self.labels.append(label)
        return idx

    def __len__(self) -> int:
        return len(self.labels)


def _read_rows(path: Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected a header row")
        return [h.strip() for h in header], list(reader)


def _column(header: list[str], name: str, path: Path) -> int:
    try:
        return header.index(name)
    except ValueError:
        raise SchemaError(f"{path}: missing column '{name}'")


def load_csv(manifest: DatasetManifest) -> tuple[TemporalGraph, IdMap]:
    """Load a dataset's files into an immutable graph plus its id map.

    Raises:
        SchemaError: A declared column is absent from a header.
        RowParseError: A timestamp or feature fails to parse (carries the
            1-based line number).
    """
    ids = IdMap()
    header, rows = _read_rows(manifest.edges)
    si = _column(header, manifest.src_col, manifest.edges)
    di = _column(header, manifest.dst_col, manifest.edges)
    ti = _column(header, manifest.t_col, manifest.edges)
    feat_cols = [
        i for i, name in enumerate(header) if i not in (si, di, ti)
    ]

    n = len(rows)
    src = np.empty(n, dtype=np.int64)
    dst = np.empty(n, dtype=np.int64)
    ts = np.empty(n, dtype=np.int64)
    feats = np.empty((n, len(feat_cols)), dtype=np.float64) if feat_cols else None
    for r, row in enumerate(rows):
        line_no = r + 2  # header is line 1
        try:
            ts[r] = int(row[ti])
        except (ValueError, IndexError):
            raise RowParseError(line_no, f"bad timestamp {row[ti] if ti < len(row) else '<missing>'!r}")
        src[r] = ids.intern(row[si])
        dst[r] = ids.intern(row[di])
        for j, c in enumerate(feat_cols):
            try:
                feats[r, j] = float(row[c])
            except (ValueError, IndexError):
                raise RowParseError(line_no, f"bad feature value in column '{header[c]}'")

    node_t = node_ids = node_feat = None
    if manifest.node_events is not None:
        nh, nrows = _read_rows(manifest.node_events)
        ni = _column(nh, "node", manifest.node_events)
        nti = _column(nh, manifest.t_col, manifest.node_events)
        nfeat_cols = [i for i in range(len(nh)) if i not in (ni, nti)]
        m = len(nrows)
        node_t = np.empty(m, dtype=np.int64)
        node_ids = np.empty(m, dtype=np.int64)
        node_feat = np.empty((m, len(nfeat_cols)), dtype=np.float64) if nfeat_cols else None
        for r, row in enumerate(nrows):
            line_no = r + 2
            try:
                node_t[r] = int(row[nti])
            except (ValueError, IndexError):
                raise RowParseError(line_no, "bad node-event timestamp")
            node_ids[r] = ids.intern(row[ni])
            for j, c in enumerate(nfeat_cols):
                try:
                    node_feat[r, j] = float(row[c])
                except (ValueError, IndexError):
                    raise RowParseError(line_no, f"bad feature value in column '{nh[c]}'")

    static = None
    if manifest.static_features is not None:
        sh, srows = _read_rows(manifest.static_features)
        sni = _column(sh, "node", manifest.static_features)
        sfeat_cols = [i for i in range(len(sh)) if i != sni]
        static = np.zeros((len(ids), len(sfeat_cols)), dtype=np.float64)
        seen = np.zeros(len(ids), dtype=bool)
        for r, row in enumerate(srows):
            line_no = r + 2
            label = row[sni]
            if label not in ids.to_id:
                raise RowParseError(line_no, f"static features for unknown node {label!r}")
            node = ids.to_id[label]
            seen[node] = True
            for j, c in enumerate(sfeat_cols):
                try:
                    static[node, j] = float(row[c])
                except (ValueError, IndexError):
                    raise RowParseError(line_no, f"bad static feature in column '{sh[c]}'")
        if not seen.all():
            missing = int(np.flatnonzero(~seen)[0])
            raise ValidationError(
                f"static features missing for node {ids.labels[missing]!r}"
            )

    graph = TemporalGraph.from_arrays(
        ts,
        src,
        dst,
        manifest.granularity,
        edge_feat=feats,
        node_t=node_t,
        node_ids=node_ids,
        node_feat=node_feat,
        static_feats=static,
    )
    return graph, ids


def load_negatives(path: str | Path, ids: IdMap) -> list[np.ndarray]:
    """Read per-positive negative destinations (one whitespace-separated
    line of labels per test positive), mapped through the id map."""
    out: list[np.ndarray] = []
    for line_no, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        labels = raw.split()
        row = np.empty(len(labels), dtype=np.int64)
        for j, label in enumerate(labels):
            if label not in ids.to_id:
                raise RowParseError(line_no, f"unknown node label {label!r}")
            row[j] = ids.to_id[label]
        out.append(row)
    return out


def write_events_csv(
    graph: TemporalGraph,
    path: str | Path,
    view: GraphView | None = None,
    ids: IdMap | None = None,
    src_col: str = "src",
    dst_col: str = "dst",
    t_col: str = "t",
) -> int:
    """Write edge events (optionally restricted to a view) in storage order.

    Ids map back to their labels when an id map is given; feature columns
    are named f0, f1, and so on. Returns the number of rows written.
    """
    lo, hi = (0, graph.num_edges) if view is None else view.edge_range
    d = graph.edge_feat.shape[1] if graph.edge_feat is not None else 0
    header = [src_col, dst_col, t_col] + [f"f{j}" for j in range(d)]

    def label(i: int) -> str:
        return ids.labels[i] if ids is not None else str(i)

    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for r in range(lo, hi):
            row = [
                label(int(graph.edge_src[r])),
                label(int(graph.edge_dst[r])),
                str(int(graph.edge_t[r])),
            ]
            if d:
                row += [repr(float(x)) for x in graph.edge_feat[r]]
            writer.writerow(row)
    return hi - lo


@dataclass(frozen=True)
class SplitSpec:
    """Resolved chronological split: ratios plus boundary timestamps.

    ``val_start``/``test_start`` are the first timestamps of the val and
    test splits; every train event is strictly earlier than ``val_start``.
    """

    ratios: tuple[float, float, float]
    val_start: Timestamp
    test_start: Timestamp


def resolve_split(
    graph: TemporalGraph, ratios: tuple[float, float, float]
) -> SplitSpec:
    """Resolve ratio targets to snapped boundary timestamps.

    Boundary indices start at floor(ratio * num_edges) over the
    time-sorted edges, then snap forward so no timestamp straddles two
    splits (a shared-timestamp group stays whole in the earlier split).

    Raises:
        DegenerateSplitError: A split would be empty after snapping.
        ValidationError: Ratios not positive or not summing to 1.
    """
    if len(ratios) != 3 or any(r <= 0 for r in ratios):
        raise ValidationError(f"ratios must be three positive numbers, got {ratios}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValidationError(f"ratios must sum to 1, got {sum(ratios)}")
    e = graph.num_edges
    if e == 0:
        raise DegenerateSplitError("cannot split an edgeless graph")
    t = graph.edge_t

    def snap(target: int, floor: int) -> int:
        b = max(target, floor)
        if 0 < b < e and t[b] == t[b - 1]:
            b = int(np.searchsorted(t, t[b - 1], side="right"))
        return b

    b1 = snap(int(ratios[0] * e), 1)
    b2 = snap(int((ratios[0] + ratios[1]) * e), b1 + 1)
    if b1 <= 0 or b2 <= b1 or b2 >= e:
        raise DegenerateSplitError(
            f"split boundaries ({b1}, {b2}) leave an empty split for {e} edges"
        )
    return SplitSpec(tuple(ratios), int(t[b1]), int(t[b2]))


def chronological_split(
    graph: TemporalGraph, ratios: tuple[float, float, float] = (0.70, 0.15, 0.15)
) -> tuple[GraphView, GraphView, GraphView]:
    """Split a graph into train/val/test views by time.

    After snapping, max train timestamp < min val timestamp < min test
    timestamp strictly; node events partition by the same boundaries.
    """
    spec = resolve_split(graph, ratios)
    train = GraphView(graph, graph.t_min, spec.val_start)
    val = GraphView(graph, spec.val_start, spec.test_start)
    test = GraphView(graph, spec.test_start, graph.t_max + 1)
    return train, val, test
