import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { describe, expect, it } from "vitest";

import {
  parseEventsCsv,
  parseManifest,
  parseNegatives,
  serializeManifest,
  tableStats,
  tableSurprise,
} from "../src/index.js";

const FIXTURES = resolve(__dirname, "../../fixtures");

describe("manifest", () => {
  it("parses the rich fixture with resolved paths", () => {
    const m = parseManifest(join(FIXTURES, "rich", "rich.toml"));
    expect(m.edges.endsWith("edges.csv")).toBe(true);
    expect(m.nodeEvents?.endsWith("node_events.csv")).toBe(true);
    expect(m.negatives?.endsWith("negatives.txt")).toBe(true);
    expect(m.granularity).toBe("second");
    expect(m.srcCol).toBe("src");
  });

  it("round-trips through serialize/parse", () => {
    const m = parseManifest(join(FIXTURES, "rich", "rich.toml"));
    const dir = mkdtempSync(join(tmpdir(), "tgkit-client-"));
    const path = join(dir, "copy.toml");
    writeFileSync(path, serializeManifest(m));
    expect(parseManifest(path)).toEqual(m);
  });

  it("rejects unknown keys", () => {
    const dir = mkdtempSync(join(tmpdir(), "tgkit-client-"));
    const path = join(dir, "bad.toml");
    writeFileSync(path, "edges = e.csv\nbogus = 1\n");
    expect(() => parseManifest(path)).toThrow(/unknown manifest key/);
  });
});

describe("event CSV", () => {
  it("parses the tiny fixture", () => {
    const t = parseEventsCsv(join(FIXTURES, "tiny", "edges.csv"));
    expect(t.src).toEqual(["u1", "u2", "u1"]);
    expect(t.dst).toEqual(["i1", "i1", "i2"]);
    expect(t.t).toEqual([5, 7, 7]);
    expect(t.featureNames).toEqual([]);
  });

  it("parses feature columns from the rich fixture", () => {
    const t = parseEventsCsv(join(FIXTURES, "rich", "edges.csv"));
    expect(t.t.length).toBe(60);
    expect(t.featureNames).toEqual(["weight", "score"]);
    expect(t.features[0].length).toBe(2);
  });

  it("reports missing columns by name", () => {
    const dir = mkdtempSync(join(tmpdir(), "tgkit-client-"));
    const path = join(dir, "bad.csv");
    writeFileSync(path, "source,dst,t\na,b,1\n");
    expect(() => parseEventsCsv(path)).toThrow(/missing column 'src'/);
  });

  it("computes client-side stats", () => {
    const t = parseEventsCsv(join(FIXTURES, "tiny", "edges.csv"));
    expect(tableStats(t)).toEqual({
      nodes: 4,
      edges: 3,
      uniqueEdges: 3,
      uniqueSteps: 2,
    });
    // All pairs distinct, so everything at/after t=7 is unseen.
    expect(tableSurprise(t, 7)).toBe(1);
    expect(tableSurprise(t, 100)).toBe(0);
  });
});

describe("negatives file", () => {
  it("parses one line of labels per test positive", () => {
    const rows = parseNegatives(join(FIXTURES, "rich", "negatives.txt"));
    expect(rows.length).toBe(9);
    for (const row of rows) expect(row.length).toBe(3);
  });
});
