import { RunnerOptions, parseKeyValues, runCli } from "./runner.js";

export type Ratios = [number, number, number];

function ratioFlag(ratios?: Ratios): string[] {
  return ratios ? ["--ratios", ratios.join(",")] : [];
}

export interface Stats {
  nodes: number;
  edges: number;
  nodeEvents?: number;
  uniqueEdges: number;
  uniqueSteps: number;
  surprise?: number;
}

/** `tgkit stats` — dataset statistics, optionally with surprise at the
 * resolved test boundary. */
export function stats(
  manifest: string,
  opts?: { split?: Ratios; plot?: string } & RunnerOptions,
): Stats {
  const args = ["stats", manifest];
  if (opts?.split) args.push("--split", opts.split.join(","));
  if (opts?.plot) args.push("--plot", opts.plot);
  const kv = parseKeyValues(runCli(args, opts));
  const need = (key: string): number => {
    const value = kv.get(key);
    if (value === undefined) throw new Error(`stats output missing '${key}'`);
    return Number(value);
  };
  const out: Stats = {
    nodes: need("nodes"),
    edges: need("edges"),
    uniqueEdges: need("unique_edges"),
    uniqueSteps: need("unique_steps"),
  };
  if (kv.has("node_events")) out.nodeEvents = Number(kv.get("node_events"));
  if (kv.has("surprise")) out.surprise = Number(kv.get("surprise"));
  return out;
}

export interface DiscretizeResult {
  buckets: number;
  events: number;
  outPath: string;
}

/** `tgkit discretize` — write a coarser-granularity CSV. */
export function discretize(
  manifest: string,
  granularity: string,
  outPath: string,
  opts?: { reduce?: string } & RunnerOptions,
): DiscretizeResult {
  const args = ["discretize", manifest, "--granularity", granularity,
                "--out", outPath];
  if (opts?.reduce) args.push("--reduce", opts.reduce);
  const kv = parseKeyValues(runCli(args, opts));
  return {
    buckets: Number(kv.get("buckets")),
    events: Number(kv.get("events")),
    outPath: kv.get("out") ?? outPath,
  };
}

export interface SplitResult {
  train: string;
  val: string;
  test: string;
  idMap: string;
}

/** `tgkit split` — chronological train/val/test CSVs plus the id map. */
export function split(
  manifest: string,
  outDir: string,
  opts?: { ratios?: Ratios } & RunnerOptions,
): SplitResult {
  runCli(["split", manifest, "--out-dir", outDir, ...ratioFlag(opts?.ratios)], opts);
  return {
    train: `${outDir}/train.csv`,
    val: `${outDir}/val.csv`,
    test: `${outDir}/test.csv`,
    idMap: `${outDir}/id_map.csv`,
  };
}

export interface EdgeBankResult {
  valMrr: number | null;
  testMrr: number;
}

/** `tgkit edgebank` — one-vs-many MRR for the memorization baseline. */
export function edgebank(
  manifest: string,
  opts?: {
    ratios?: Ratios;
    batchSize?: number;
    negatives?: string;
    uniformNegatives?: number;
    seed?: number;
  } & RunnerOptions,
): EdgeBankResult {
  const args = ["edgebank", manifest, ...ratioFlag(opts?.ratios)];
  if (opts?.batchSize !== undefined) args.push("--batch-size", String(opts.batchSize));
  if (opts?.negatives) args.push("--negatives", opts.negatives);
  if (opts?.uniformNegatives !== undefined)
    args.push("--uniform-negatives", String(opts.uniformNegatives));
  if (opts?.seed !== undefined) args.push("--seed", String(opts.seed));
  const kv = parseKeyValues(runCli(args, opts));
  const val = kv.get("val_mrr");
  return {
    valMrr: val === "n/a" || val === undefined ? null : Number(val),
    testMrr: Number(kv.get("test_mrr")),
  };
}

export interface GrowthLabels {
  counts: number[];
  labels: number[];
}

/** `tgkit growth-labels` — per-snapshot edge counts and growth labels. */
export function growthLabels(
  manifest: string,
  granularity: string,
  opts?: { plot?: string } & RunnerOptions,
): GrowthLabels {
  const args = ["growth-labels", manifest, "--granularity", granularity];
  if (opts?.plot) args.push("--plot", opts.plot);
  const kv = parseKeyValues(runCli(args, opts));
  const nums = (key: string): number[] => {
    const text = kv.get(key) ?? "";
    return text.length ? text.split(" ").map(Number) : [];
  };
  return { counts: nums("counts"), labels: nums("labels") };
}

export interface BenchResult {
  speedup: number;
  outputsMatch: boolean;
}

/** `tgkit bench-discretize` — engine vs dictionary-baseline timing. */
export function benchDiscretize(
  manifest: string,
  granularity: string,
  opts?: { reduce?: string; plot?: string } & RunnerOptions,
): BenchResult {
  const args = ["bench-discretize", manifest, "--granularity", granularity];
  if (opts?.reduce) args.push("--reduce", opts.reduce);
  if (opts?.plot) args.push("--plot", opts.plot);
  const kv = parseKeyValues(runCli(args, opts));
  return {
    speedup: Number(kv.get("speedup")),
    outputsMatch: kv.get("outputs_match") === "yes",
  };
}

/** Engine version string (must match this client's own version). */
export function engineVersion(opts?: RunnerOptions): string {
  return runCli(["--version"], opts).trim();
}
