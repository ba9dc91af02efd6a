#!/usr/bin/env python3
"""Regenerate the static CSV fixtures shared by the Python and client suites.

Deterministic by construction; run from the repo root:

    python3 fixtures/gen_fixtures.py
"""

from __future__ import annotations

import random
from pathlib import Path

ROOT = Path(__file__).parent


def write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path}")


def tiny() -> None:
    write(
        ROOT / "tiny" / "edges.csv",
        "src,dst,t\nu1,i1,5\nu2,i1,7\nu1,i2,7\n",
    )
    write(
        ROOT / "tiny" / "tiny.toml",
        "edges = edges.csv\ngranularity = second\n",
    )


def growth() -> None:
    # Daily snapshot edge counts 3, 5, 4 over second-granularity timestamps.
    day = 86_400
    rows = ["src,dst,t"]
    times = (
        [0, 100, 200]
        + [day + i * 10 for i in range(5)]
        + [2 * day + i * 10 for i in range(4)]
    )
    rng = random.Random(7)
    for t in times:
        rows.append(f"n{rng.randrange(4)},n{rng.randrange(4)},{t}")
    write(ROOT / "growth" / "edges.csv", "\n".join(rows) + "\n")
    write(
        ROOT / "growth" / "growth.toml",
        "edges = edges.csv\ngranularity = second\n",
    )


def rich() -> None:
    # 60 edges with two feature columns and strictly increasing timestamps,
    # so split boundaries at 0.70/0.15/0.15 land exactly at 42 and 51.
    rng = random.Random(13)
    labels = [f"v{i}" for i in range(8)]
    rows = ["src,dst,t,weight,score"]
    edges = []
    for i in range(60):
        s, d = rng.sample(range(8), 2)
        t = 1000 + i
        w = round(rng.uniform(0.0, 5.0), 3)
        c = float(rng.randrange(10))
        edges.append((labels[s], labels[d], t))
        rows.append(f"{labels[s]},{labels[d]},{t},{w},{c}")
    write(ROOT / "rich" / "edges.csv", "\n".join(rows) + "\n")

    nrows = ["node,t,label"]
    for i in range(10):
        nrows.append(f"{labels[rng.randrange(8)]},{1000 + i * 6},{round(rng.uniform(0, 1), 3)}")
    write(ROOT / "rich" / "node_events.csv", "\n".join(nrows) + "\n")

    srows = ["node,s0,s1"]
    for lab in labels:
        srows.append(f"{lab},{round(rng.uniform(-1, 1), 3)},{round(rng.uniform(-1, 1), 3)}")
    write(ROOT / "rich" / "static.csv", "\n".join(srows) + "\n")

    # Three negative destination labels per test positive (last 9 edges).
    neg_lines = []
    for s, d, t in edges[51:]:
        pool = [lab for lab in labels if lab != d]
        neg_lines.append(" ".join(rng.sample(pool, 3)))
    write(ROOT / "rich" / "negatives.txt", "\n".join(neg_lines) + "\n")

    write(
        ROOT / "rich" / "rich.toml",
        "# full-surface fixture\n"
        "edges = edges.csv\n"
        "node_events = node_events.csv\n"
        "static_features = static.csv\n"
        "negatives = negatives.txt\n"
        "granularity = second\n"
        "src_col = src\n"
        "dst_col = dst\n"
        "t_col = t\n",
    )


if __name__ == "__main__":
    tiny()
    growth()
    rich()
