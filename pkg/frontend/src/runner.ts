/** Subprocess plumbing for the graspbench CLI. */

import { execFile } from "node:child_process";
import { mkdtemp, rm } from "node:fs/promises";
import { existsSync } from "node:fs";
import { tmpdir } from "node:os";
import { delimiter, dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { promisify } from "node:util";

import type { RunnerOptions } from "./types.js";

const execFileAsync = promisify(execFile);

function findRepoSrc(): string | undefined {
  // when the client sits next to the Python package (frontend/ beside src/),
  // put that src/ on PYTHONPATH so "python3 -m graspbench" works uninstalled
  let dir = dirname(fileURLToPath(import.meta.url));
  for (let i = 0; i < 6; i++) {
    const candidate = join(dir, "src", "graspbench", "__init__.py");
    if (existsSync(candidate)) {
      return join(dir, "src");
    }
    dir = dirname(dir);
  }
  return undefined;
}

export function cliCommand(opts: RunnerOptions = {}): string[] {
  if (opts.command) return opts.command;
  const fromEnv = process.env.GRASPBENCH_CLI;
  if (fromEnv) return fromEnv.split(/\s+/);
  return ["python3", "-m", "graspbench"];
}

export async function runCli(
  args: string[],
  opts: RunnerOptions = {},
): Promise<{ stdout: string; stderr: string }> {
  const [exe, ...prefix] = cliCommand(opts);
  const env: Record<string, string | undefined> = { ...process.env, ...opts.env };
  const src = findRepoSrc();
  if (src) {
    env.PYTHONPATH = env.PYTHONPATH ? `${src}${delimiter}${env.PYTHONPATH}` : src;
  }
  try {
    return await execFileAsync(exe, [...prefix, ...args], {
      env,
      maxBuffer: 64 * 1024 * 1024,
    });
  } catch (err) {
    const e = err as { code?: number; stderr?: string; message?: string };
    throw new Error(
      `graspbench CLI failed (exit ${e.code ?? "?"}): ${(e.stderr || e.message || "").trim()}`,
    );
  }
}

export async function withTempDir<T>(
  opts: RunnerOptions,
  body: (dir: string) => Promise<T>,
): Promise<T> {
  const dir = await mkdtemp(join(tmpdir(), "graspbench-client-"));
  try {
    return await body(dir);
  } finally {
    if (!opts.keepTemp) {
      await rm(dir, { recursive: true, force: true });
    }
  }
}
