/**
 * Contract tests against a stateful fake service: whatever the API returned
 * is exactly what the views must show, with no client-side numerics.
 */

import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { createApp, type App } from "../src/main.js";
import { ViewState } from "../src/state.js";
import { FakeService, type Recorded } from "./fake_service.js";

let service: FakeService;
let app: App;

function lastPayload(service: FakeService, pathPart: string): Recorded {
  const hit = [...service.recorded].reverse().find((r) => r.path.includes(pathPart));
  if (!hit) throw new Error(`no recorded request matching ${pathPart}`);
  return hit;
}

function text(testId: string): string {
  const node = document.querySelector(`[data-testid="${testId}"]`);
  if (!node) throw new Error(`missing [data-testid=${testId}]`);
  return node.textContent ?? "";
}

beforeEach(async () => {
  document.body.innerHTML = '<div id="app"></div>';
  service = new FakeService();
  app = createApp(
    document.getElementById("app")!,
    new ApiClient("http://fake", service.fetch),
  );
  await app.loadDataset("/data/manifest.json");
});

describe("channel strip view", () => {
  it("renders exactly the samples the service returned", async () => {
    const payload = lastPayload(service, "/channels/c3").payload as {
      samples: number[];
    };
    const plot = document.querySelector('[data-testid="channel-plot"]') as unknown as {
      __samples?: number[];
      dataset: { sampleCount: string };
    };
    expect(plot.__samples).toEqual(payload.samples);
    expect(plot.dataset.sampleCount).toBe(String(payload.samples.length));
  });

  it("populates the channel selector from session metadata", () => {
    const options = [...document.querySelectorAll('[data-testid="channel-select"] option')];
    expect(options.map((o) => o.getAttribute("value"))).toEqual(
      ["c3", "c4", "p3", "p4", "o1", "o2", "EOG"],
    );
  });

  it("surfaces a prerequisite failure as a banner", async () => {
    app.state.stage = "clean"; // ICA has not run yet
    await app.channels.refresh();
    const alert = document.querySelector('.channels-view [role="alert"]');
    expect(alert?.textContent).toContain("409");
  });

  it("raw and clean stages show different series once ICA ran", async () => {
    await app.runFilter(40, 101);
    await app.runIca(0.7, 0);
    app.state.stage = "raw";
    await app.channels.refresh();
    const raw = lastPayload(service, "stage=raw").payload as { samples: number[] };
    app.state.stage = "clean";
    await app.channels.refresh();
    const clean = lastPayload(service, "stage=clean").payload as { samples: number[] };
    expect(clean.samples).not.toEqual(raw.samples);
  });
});

describe("ica panel", () => {
  beforeEach(async () => {
    await app.runFilter(40, 101);
    await app.runIca(0.7, 0);
  });

  it("lists every component with its score and the applied set", () => {
    const rows = document.querySelectorAll(".component-row");
    expect(rows).toHaveLength(7);
    const payload = lastPayload(service, "ica/components").payload as {
      components: { index: number; score: number }[];
      rejected: number[];
    };
    for (const component of payload.components) {
      const row = text(`component-${component.index}`);
      expect(row).toContain(String(component.score));
    }
    expect(text("applied-rejections")).toBe(
      `applied: [${payload.rejected.join(", ")}]`,
    );
  });

  it("applies the staged toggle set and marks downstream views stale", async () => {
    const before = lastPayload(service, "stage=clean").payload as { samples: number[] };

    const box = document.querySelector('[data-testid="reject-4"]') as HTMLInputElement;
    box.checked = true;
    box.dispatchEvent(new Event("change"));
    await app.ica.apply();

    const posted = lastPayload(service, "ica/reject");
    expect(posted.body).toEqual({ trial: 0, indices: [2, 4] });
    expect(text("applied-rejections")).toBe("applied: [2, 4]");

    // downstream views are stale until they refetch
    expect(app.state.isStale("channels")).toBe(true);
    expect(app.state.isStale("bands")).toBe(true);
    expect(app.state.isStale("classify")).toBe(true);
    expect(app.state.isStale("ica")).toBe(false);

    app.state.stage = "clean";
    await app.channels.refresh();
    expect(app.state.isStale("channels")).toBe(false);
    const after = lastPayload(service, "stage=clean").payload as { samples: number[] };
    expect(after.samples).not.toEqual(before.samples);
  });

  it("double-apply of the same set is idempotent", async () => {
    await app.ica.apply();
    const first = text("applied-rejections");
    await app.ica.apply();
    expect(text("applied-rejections")).toBe(first);
  });
});

describe("band and spectrum view", () => {
  it("limits the selector to the five rhythm bands", () => {
    const options = [...document.querySelectorAll('[data-testid="band-select"] option')];
    expect(options.map((o) => o.getAttribute("value"))).toEqual(
      ["delta", "theta", "alpha", "beta", "gamma"],
    );
  });

  it("shows the served spectrum peak verbatim", async () => {
    await app.bands.refresh();
    const payload = lastPayload(service, "/spectrum").payload as {
      peak_frequency_hz: number;
    };
    expect(text("peak-hz")).toBe(String(payload.peak_frequency_hz));
  });

  it("caption carries both clinical and dyadic edges", async () => {
    await app.bands.refresh();
    const caption = text("band-caption");
    expect(caption).toContain("7.8125");
    expect(caption).toContain("15.625");
  });
});

describe("classification dashboard", () => {
  beforeEach(async () => {
    await app.runFilter(40, 101);
    await app.runIca(0.7, 0);
  });

  it("renders accuracy, confusion and loss exactly as served", async () => {
    await app.classify.run();
    const run = lastPayload(service, "/classify").payload as {
      training: { accuracy: number; confusion: number[][] };
      cross_validation: { mean_accuracy: number };
      loss_curve: number[];
    };
    expect(text("training-accuracy")).toBe(String(run.training.accuracy));
    expect(text("cv-accuracy")).toBe(String(run.cross_validation.mean_accuracy));
    run.training.confusion.forEach((row, i) => {
      row.forEach((count, j) => {
        expect(text(`confusion-${i}-${j}`)).toBe(String(count));
      });
    });
    expect(text("final-loss")).toBe(String(run.loss_curve.at(-1)));
    // 5x5 grid rendered in full
    expect(document.querySelectorAll('[data-testid^="confusion-"]')).toHaveLength(25);
  });

  it("blocks a k-NN k larger than the trial count before posting", async () => {
    app.classify.kind = "knn";
    app.classify.hyperparameters = { k: 999 };
    const requestsBefore = service.recorded.length;
    await app.classify.run();
    expect(text("form-validation")).toContain("999");
    expect(service.recorded.length).toBe(requestsBefore);
  });

  it("re-running with the same seed shows identical numbers", async () => {
    await app.classify.run();
    const first = text("training-accuracy");
    await app.classify.run();
    expect(text("training-accuracy")).toBe(first);
  });
});

describe("view state", () => {
  it("propagates staleness downstream only", () => {
    const state = new ViewState();
    state.markStaleFrom("features");
    expect(state.isStale("classify")).toBe(true);
    expect(state.isStale("channels")).toBe(false);
    state.markStaleFrom("filter");
    expect(state.isStale("channels")).toBe(true);
    expect(state.isStale("ica")).toBe(true);
  });
});
