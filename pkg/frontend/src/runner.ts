import { spawnSync } from "node:child_process";

export const VERSION = "0.1.0";

/** Raised when the CLI exits nonzero; carries its one-line diagnostic. */
export class CliError extends Error {
  constructor(
    readonly exitCode: number,
    readonly diagnostic: string,
    args: string[],
  ) {
    super(`tgkit ${args.join(" ")} failed (exit ${exitCode}): ${diagnostic}`);
    this.name = "CliError";
  }
}

export interface RunnerOptions {
  /** Python interpreter running the engine; TGKIT_PYTHON overrides. */
  python?: string;
  cwd?: string;
}

function interpreter(options?: RunnerOptions): string {
  return options?.python ?? process.env.TGKIT_PYTHON ?? "python3";
}

/** Run one CLI subcommand and return its stdout. */
export function runCli(args: string[], options?: RunnerOptions): string {
  const proc = spawnSync(interpreter(options), ["-m", "tgkit", ...args], {
    cwd: options?.cwd,
    encoding: "utf-8",
    maxBuffer: 256 * 1024 * 1024,
  });
  if (proc.error) {
    throw proc.error;
  }
  if (proc.status !== 0) {
    const diagnostic = (proc.stderr ?? "").trim().split("\n").pop() ?? "";
    throw new CliError(proc.status ?? -1, diagnostic, args);
  }
  return proc.stdout;
}

/** Drop `# time:` lines so outputs compare deterministically. */
export function stripTimings(stdout: string): string {
  return stdout
    .split("\n")
    .filter((line) => !line.startsWith("# time:"))
    .join("\n");
}

/** Parse `key: value` stdout lines into a map (first wins). */
export function parseKeyValues(stdout: string): Map<string, string> {
  const out = new Map<string, string>();
  for (const line of stdout.split("\n")) {
    const idx = line.indexOf(": ");
    if (idx > 0 && !line.startsWith("#")) {
      const key = line.slice(0, idx);
      if (!out.has(key)) out.set(key, line.slice(idx + 2));
    }
  }
  return out;
}
