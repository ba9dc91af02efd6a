export {
  benchDiscretize,
  discretize,
  edgebank,
  engineVersion,
  growthLabels,
  split,
  stats,
} from "./client.js";
export type {
  BenchResult,
  DiscretizeResult,
  EdgeBankResult,
  GrowthLabels,
  Ratios,
  SplitResult,
  Stats,
} from "./client.js";
export {
  parseEventsCsv,
  parseNegatives,
  tableStats,
  tableSurprise,
} from "./formats.js";
export type { EventTable } from "./formats.js";
export { parseManifest, serializeManifest } from "./manifest.js";
export type { Granularity, Manifest } from "./manifest.js";
export { CliError, VERSION, runCli, stripTimings } from "./runner.js";
export type { RunnerOptions } from "./runner.js";
