/** Spawn the real backend service for integration tests. */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";

const REPO_ROOT = resolve(__dirname, "..", "..", "..");
const DATASET = join(REPO_ROOT, "src", "storyatlas", "data", "duerer_journeys.json");

export interface BackendHandle {
  baseUrl: string;
  stop(): Promise<void>;
}

let nextPort = 8800 + (process.pid % 100);

export async function startBackend(): Promise<BackendHandle> {
  const port = nextPort++;
  const persistDir = mkdtempSync(join(tmpdir(), "storyatlas-frontend-"));
  const child: ChildProcess = spawn(
    "python3",
    [
      "-m",
      "storyatlas.cli",
      "--data",
      DATASET,
      "--persist-dir",
      persistDir,
      "--port",
      String(port),
    ],
    { cwd: REPO_ROOT, stdio: ["ignore", "pipe", "pipe"] },
  );
  let log = "";
  child.stdout?.on("data", (chunk) => (log += chunk));
  child.stderr?.on("data", (chunk) => (log += chunk));

  const baseUrl = `http://127.0.0.1:${port}`;
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    if (child.exitCode !== null) {
      throw new Error(`backend exited early (${child.exitCode}):\n${log}`);
    }
    try {
      const response = await fetch(`${baseUrl}/api/entities`);
      if (response.ok) {
        return {
          baseUrl,
          stop: () =>
            new Promise((done) => {
              child.once("exit", () => done());
              child.kill("SIGTERM");
              setTimeout(() => child.kill("SIGKILL"), 3000).unref();
            }),
        };
      }
    } catch {
      // not up yet
    }
    await new Promise((tick) => setTimeout(tick, 200));
  }
  child.kill("SIGKILL");
  throw new Error(`backend did not come up on port ${port}:\n${log}`);
}
