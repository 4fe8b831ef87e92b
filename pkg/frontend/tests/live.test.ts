/**
 * End-to-end check against the real HTTP service: generates a five-class
 * synthetic dataset, boots the Python server, drives the UI through the full
 * workflow, and verifies every displayed number equals the intercepted API
 * payload. Set EEGSIG_SKIP_LIVE=1 to skip (e.g. where python3 is missing).
 */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { createApp, type App } from "../src/main.js";

const SKIP =
  process.env.EEGSIG_SKIP_LIVE === "1" ||
  spawnSync("python3", ["-c", "import eegsig"], { stdio: "ignore" }).status !== 0;

const PORT = 8750 + (process.pid % 200);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | null = null;
let workdir: string;
let manifest: string;
const intercepted: { path: string; payload: unknown }[] = [];

async function waitForServer(timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/sessions`, { method: "POST" });
      if (response.ok) return;
    } catch {
      /* not up yet */
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error("service did not come up");
}

// happy-dom's Response.clone shares the body stream, so intercept by reading
// the text once and handing the caller a rebuilt Response
const recordingFetch = async (input: string, init?: RequestInit) => {
  const response = await fetch(input, init);
  const body = await response.text();
  try {
    intercepted.push({ path: new URL(input).pathname, payload: JSON.parse(body) });
  } catch {
    /* non-JSON */
  }
  return new Response(body, {
    status: response.status,
    headers: { "Content-Type": "application/json" },
  });
};

function text(testId: string): string {
  const node = document.querySelector(`[data-testid="${testId}"]`);
  if (!node) throw new Error(`missing [data-testid=${testId}]`);
  return node.textContent ?? "";
}

function lastPayload<T>(pathPart: string): T {
  const hit = [...intercepted].reverse().find((r) => r.path.includes(pathPart));
  if (!hit) throw new Error(`nothing intercepted for ${pathPart}`);
  return hit.payload as T;
}

describe.skipIf(SKIP)("live service", () => {
  let app: App;

  beforeAll(async () => {
    workdir = mkdtempSync(join(tmpdir(), "eegsig-live-"));
    manifest = join(workdir, "data", "manifest.json");
    const gen = spawnSync(
      "python3",
      ["-m", "eegsig.cli", "generate-fixture", "--classes", "5", "--per-class", "3",
       "--seed", "7", "--out", join(workdir, "data")],
      { stdio: "inherit" },
    );
    if (gen.status !== 0) throw new Error("fixture generation failed");
    server = spawn(
      "python3",
      ["-m", "eegsig.cli", "serve", "--host", "127.0.0.1", "--port", String(PORT)],
      { stdio: "ignore" },
    );
    await waitForServer();

    document.body.innerHTML = '<div id="app"></div>';
    app = createApp(
      document.getElementById("app")!,
      new ApiClient(BASE, recordingFetch),
    );
    await app.loadDataset(manifest);
    await app.runFilter(40, 101);
    await app.runIca(0.7, 0);
  });

  afterAll(() => {
    server?.kill();
    if (workdir) rmSync(workdir, { recursive: true, force: true });
  });

  it("dashboard shows accuracy and the 5x5 confusion matrix from the API", async () => {
    app.classify.kind = "mlp";
    app.classify.hyperparameters = { epochs: 200 };
    app.classify.cvFolds = 5;
    app.classify.seed = 7;
    await app.classify.run();

    const run = lastPayload<{
      training: { accuracy: number; confusion: number[][] };
      cross_validation: { mean_accuracy: number };
      loss_curve: number[];
    }>("/classify");

    expect(text("training-accuracy")).toBe(String(run.training.accuracy));
    expect(text("cv-accuracy")).toBe(String(run.cross_validation.mean_accuracy));
    expect(run.training.confusion).toHaveLength(5);
    run.training.confusion.forEach((row, i) => {
      expect(row).toHaveLength(5);
      row.forEach((count, j) => {
        expect(text(`confusion-${i}-${j}`)).toBe(String(count));
      });
    });
    expect(text("final-loss")).toBe(String(run.loss_curve.at(-1)));
  });

  it("toggling one ICA rejection and applying changes the clean channel view", async () => {
    app.state.stage = "clean";
    app.state.channel = "c3";
    await app.channels.refresh();
    const before = lastPayload<{ samples: number[] }>("/channels/c3");

    await app.ica.refresh();
    const applied = new Set(app.state.appliedRejections);
    const toggleIndex = [0, 1, 2, 3, 4, 5, 6].find((i) => !applied.has(i))!;
    const box = document.querySelector(
      `[data-testid="reject-${toggleIndex}"]`,
    ) as HTMLInputElement;
    box.checked = true;
    box.dispatchEvent(new Event("change"));
    await app.ica.apply();

    expect(app.state.appliedRejections).toContain(toggleIndex);
    expect(app.state.isStale("channels")).toBe(true);

    await app.channels.refresh();
    const after = lastPayload<{ samples: number[] }>("/channels/c3");
    expect(after.samples).not.toEqual(before.samples);
    expect(app.state.isStale("channels")).toBe(false);

    // the plot carries exactly the served samples
    const plot = document.querySelector('[data-testid="channel-plot"]') as unknown as {
      __samples?: number[];
    };
    expect(plot.__samples).toEqual(after.samples);
  });

  it("channel and spectrum numbers are verbatim API values", async () => {
    await app.bands.refresh();
    const spectrum = lastPayload<{ peak_frequency_hz: number }>("/spectrum");
    expect(text("peak-hz")).toBe(String(spectrum.peak_frequency_hz));

    const window = lastPayload<{ samples: number[]; channel: string }>("/channels/c3");
    const plot = document.querySelector('[data-testid="channel-plot"]') as unknown as {
      __samples?: number[];
    };
    expect(plot.__samples).toEqual(window.samples);
  });
});
