// Thin process-level wrapper around the `lingo` command-line tool. The CLI
// prints one JSON document to stdout and uses exit codes 0 (ok), 1 (usage
// error) and 2 (data error, with {"error": ...} on stdout).

import { execFile } from "node:child_process";

/** The arguments were rejected before any work happened. */
export class LingoUsageError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "LingoUsageError";
  }
}

/** The tool ran and rejected the inputs; message comes from the tool itself. */
export class LingoDataError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "LingoDataError";
  }
}

export interface RunOptions {
  /** Executable to invoke; defaults to `lingo` on PATH or $LINGO_BIN. */
  bin?: string;
  /** Working directory for the subprocess. */
  cwd?: string;
  /** Kill the subprocess after this many milliseconds. */
  timeoutMs?: number;
}

interface RawResult {
  code: number;
  stdout: string;
  stderr: string;
}

function spawnLingo(args: string[], opts: RunOptions): Promise<RawResult> {
  const bin = opts.bin ?? process.env.LINGO_BIN ?? "lingo";
  return new Promise((resolve, reject) => {
    execFile(
      bin,
      args,
      {
        cwd: opts.cwd,
        timeout: opts.timeoutMs,
        maxBuffer: 256 * 1024 * 1024,
        encoding: "utf8",
      },
      (err, stdout, stderr) => {
        if (err && (err as NodeJS.ErrnoException).code === "ENOENT") {
          reject(new Error(`cannot find ${bin}; is the Python package installed?`));
          return;
        }
        const code =
          err && typeof (err as { code?: unknown }).code === "number"
            ? ((err as { code: number }).code as number)
            : err
              ? 1
              : 0;
        resolve({ code, stdout, stderr });
      },
    );
  });
}

/** Run a lingo subcommand and return its parsed JSON result. */
export async function runLingo<T>(args: string[], opts: RunOptions = {}): Promise<T> {
  const { code, stdout, stderr } = await spawnLingo(args, opts);
  if (code === 0) {
    return JSON.parse(stdout) as T;
  }
  if (code === 2) {
    let message = stdout.trim();
    try {
      message = (JSON.parse(stdout) as { error: string }).error;
    } catch {
      // stdout was not the expected JSON error document; keep it verbatim
    }
    throw new LingoDataError(message);
  }
  throw new LingoUsageError(stderr.trim() || `lingo exited with code ${code}`);
}
