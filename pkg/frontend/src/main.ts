/**
 * Wires the views into the page: session setup, dataset loading by server
 * path, the preprocessing forms, and the four analysis views in workflow
 * order (channels, ICA, bands/spectrum, classification).
 */

import { ApiClient, ApiError } from "./api.js";
import { banner, clear, el } from "./dom.js";
import { ViewState } from "./state.js";
import { BandSpectrumView } from "./views/bands.js";
import { ChannelStripView } from "./views/channels.js";
import { ClassifyDashboard } from "./views/classify.js";
import { IcaPanel } from "./views/ica.js";

export interface App {
  state: ViewState;
  channels: ChannelStripView;
  ica: IcaPanel;
  bands: BandSpectrumView;
  classify: ClassifyDashboard;
  loadDataset(path: string): Promise<void>;
  runFilter(cutoffHz: number, taps: number): Promise<void>;
  runIca(threshold: number, seed: number): Promise<void>;
  refreshAll(): Promise<void>;
}

export function createApp(root: HTMLElement, api: ApiClient): App {
  const state = new ViewState();
  const channels = new ChannelStripView(api, state);
  const ica = new IcaPanel(api, state);
  const bands = new BandSpectrumView(api, state);
  const classify = new ClassifyDashboard(api, state);

  const status = el("div", { class: "status", "data-testid": "status" });
  const controls = el("div", { class: "controls" });

  const pathInput = el("input", {
    type: "text",
    placeholder: "server path to manifest.json",
    "data-testid": "dataset-path",
    size: "48",
  });
  const loadButton = el("button", { "data-testid": "load-dataset" }, ["Load dataset"]);

  const cutoffInput = el("input", { type: "number", value: "40", "data-testid": "cutoff" });
  const tapsInput = el("input", { type: "number", value: "101", "data-testid": "taps" });
  const filterButton = el("button", { "data-testid": "run-filter" }, ["Low-pass filter"]);

  const thresholdInput = el("input", {
    type: "number",
    value: "0.7",
    step: "0.05",
    "data-testid": "ica-threshold",
  });
  const icaSeedInput = el("input", { type: "number", value: "0", "data-testid": "ica-seed" });
  const icaButton = el("button", { "data-testid": "run-ica" }, ["Run ICA"]);

  controls.append(
    el("div", {}, [pathInput, loadButton]),
    el("div", {}, [
      el("label", {}, ["cutoff Hz ", cutoffInput]),
      el("label", {}, ["taps ", tapsInput]),
      filterButton,
    ]),
    el("div", {}, [
      el("label", {}, ["EOG |r| threshold ", thresholdInput]),
      el("label", {}, ["seed ", icaSeedInput]),
      icaButton,
    ]),
  );

  clear(root);
  root.append(
    el("h1", {}, ["EEG analysis"]),
    status,
    controls,
    channels.root,
    ica.root,
    bands.root,
    classify.root,
  );

  function setStatus(text: string): void {
    clear(status);
    status.append(text);
  }

  function fail(prefix: string, err: unknown): void {
    if (err instanceof ApiError) {
      clear(status);
      status.append(banner(`${prefix}: ${err.status} ${err.message}`));
    } else {
      throw err;
    }
  }

  const app: App = {
    state,
    channels,
    ica,
    bands,
    classify,

    async loadDataset(path: string): Promise<void> {
      try {
        if (!state.sessionId) {
          state.sessionId = (await api.createSession()).id;
        }
        state.summary = await api.uploadDatasetPath(state.sessionId, path);
        state.channel = state.channels()[0] ?? null;
        state.stage = "raw";
        state.markStaleFrom("dataset");
        const info = state.summary.dataset;
        setStatus(
          `session ${state.sessionId}: ${info?.trials} trials, ` +
            `${info?.channels.length} channels @ ${info?.sample_rate_hz} Hz` +
            (info?.validation && !info.validation.ok ? " (validation errors!)" : ""),
        );
        await app.refreshAll();
      } catch (err) {
        fail("load", err);
      }
    },

    async runFilter(cutoffHz: number, taps: number): Promise<void> {
      if (!state.sessionId) return;
      try {
        state.summary = await api.runFilter(state.sessionId, cutoffHz, taps);
        state.stage = "filtered";
        state.markStaleFrom("filter");
        setStatus(`filtered at ${cutoffHz} Hz (${taps} taps)`);
        await app.refreshAll();
      } catch (err) {
        fail("filter", err);
      }
    },

    async runIca(threshold: number, seed: number): Promise<void> {
      if (!state.sessionId) return;
      try {
        const result = await api.runIca(state.sessionId, { threshold, seed });
        state.stage = "clean";
        state.markStaleFrom("ica");
        const rejected = result.rejections.reduce((acc, r) => acc + r.length, 0);
        setStatus(
          `ICA on ${result.trials} trials, ${rejected} components auto-rejected ` +
            `at |r| > ${threshold}`,
        );
        await app.refreshAll();
      } catch (err) {
        fail("ica", err);
      }
    },

    async refreshAll(): Promise<void> {
      await channels.refresh();
      await ica.refresh();
      await bands.refresh();
      await classify.refresh();
    },
  };

  loadButton.addEventListener("click", () => void app.loadDataset(pathInput.value));
  filterButton.addEventListener("click", () =>
    void app.runFilter(Number(cutoffInput.value), Number(tapsInput.value)),
  );
  icaButton.addEventListener("click", () =>
    void app.runIca(Number(thresholdInput.value), Number(icaSeedInput.value)),
  );

  return app;
}

declare global {
  interface Window {
    EEGSIG_API_URL?: string;
  }
}

export function bootstrap(): App | null {
  const root = document.getElementById("app");
  if (!root) return null;
  const base = window.EEGSIG_API_URL ?? "http://127.0.0.1:8750";
  return createApp(root, new ApiClient(base));
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  bootstrap();
}
