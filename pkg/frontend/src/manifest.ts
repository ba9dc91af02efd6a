import { readFileSync } from "node:fs";
import { dirname, resolve } from "node:path";

export type Granularity =
  | "event"
  | "second"
  | "minute"
  | "hour"
  | "day"
  | "week"
  | "month"
  | "year";

/** Mirror of the engine's dataset manifest (`key = value` lines). */
export interface Manifest {
  edges: string;
  granularity: Granularity;
  nodeEvents?: string;
  staticFeatures?: string;
  negatives?: string;
  srcCol: string;
  dstCol: string;
  tCol: string;
}

const KEY_MAP: Record<string, keyof Manifest> = {
  edges: "edges",
  granularity: "granularity",
  node_events: "nodeEvents",
  static_features: "staticFeatures",
  negatives: "negatives",
  src_col: "srcCol",
  dst_col: "dstCol",
  t_col: "tCol",
};

/** Parse a manifest file; relative paths resolve against its directory. */
export function parseManifest(path: string): Manifest {
  const out: Partial<Manifest> = { srcCol: "src", dstCol: "dst", tCol: "t" };
  const dir = dirname(resolve(path));
  const pathKeys = new Set(["edges", "nodeEvents", "staticFeatures", "negatives"]);
  for (const raw of readFileSync(path, "utf-8").split("\n")) {
    const line = raw.trim();
    if (!line || line.startsWith("#")) continue;
    const eq = line.indexOf("=");
    if (eq < 0) throw new Error(`manifest line is not 'key = value': ${line}`);
    const key = line.slice(0, eq).trim();
    const value = line.slice(eq + 1).trim();
    const field = KEY_MAP[key];
    if (!field) throw new Error(`unknown manifest key '${key}'`);
    if (field === "granularity") {
      out.granularity = value as Granularity;
    } else if (pathKeys.has(field)) {
      (out as Record<string, string>)[field] = resolve(dir, value);
    } else {
      (out as Record<string, string>)[field] = value;
    }
  }
  if (!out.edges) throw new Error("manifest missing required key 'edges'");
  out.granularity ??= "second";
  return out as Manifest;
}

/** Serialize a manifest back to `key = value` text. */
export function serializeManifest(manifest: Manifest): string {
  const lines = [`edges = ${manifest.edges}`];
  if (manifest.nodeEvents) lines.push(`node_events = ${manifest.nodeEvents}`);
  if (manifest.staticFeatures)
    lines.push(`static_features = ${manifest.staticFeatures}`);
  if (manifest.negatives) lines.push(`negatives = ${manifest.negatives}`);
  lines.push(`granularity = ${manifest.granularity}`);
  lines.push(`src_col = ${manifest.srcCol}`);
  lines.push(`dst_col = ${manifest.dstCol}`);
  lines.push(`t_col = ${manifest.tCol}`);
  return lines.join("\n") + "\n";
}
