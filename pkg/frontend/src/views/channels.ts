/**
 * Multichannel strip view: one channel at a time with a raw/filtered/clean
 * stage selector and windowed pagination. Renders exactly the samples the
 * service returns; HTTP failures surface as a banner instead of breaking
 * the page.
 */

import { ApiClient, ApiError } from "../api.js";
import { banner, clear, el, staleBadge } from "../dom.js";
import { linePlot } from "../plot.js";
import type { Stage, ViewState } from "../state.js";

const WINDOW_SIZE = 2500;

export class ChannelStripView {
  readonly root: HTMLElement;
  private windowStart = 0;

  constructor(
    private api: ApiClient,
    private state: ViewState,
  ) {
    this.root = el("section", { class: "view channels-view", "data-view": "channels" });
    state.onChange(() => this.renderHeader());
    this.renderHeader();
  }

  private header!: HTMLElement;
  private plotArea!: HTMLElement;

  private renderHeader(): void {
    clear(this.root);
    this.header = el("div", { class: "view-header" });
    this.header.append(el("h2", {}, ["Channels"]));
    if (this.state.isStale("channels")) {
      this.header.append(staleBadge());
    }

    const channelSelect = el("select", { "data-testid": "channel-select" });
    for (const name of this.state.channels()) {
      channelSelect.append(el("option", { value: name }, [name]));
    }
    if (this.state.channel) channelSelect.value = this.state.channel;
    channelSelect.addEventListener("change", () => {
      this.state.channel = channelSelect.value;
      void this.refresh();
    });

    const stageSelect = el("select", { "data-testid": "stage-select" });
    for (const stage of ["raw", "filtered", "clean"]) {
      stageSelect.append(el("option", { value: stage }, [stage]));
    }
    stageSelect.value = this.state.stage;
    stageSelect.addEventListener("change", () => {
      this.state.stage = stageSelect.value as Stage;
      void this.refresh();
    });

    const trialInput = el("input", {
      type: "number",
      min: "0",
      value: String(this.state.trial),
      "data-testid": "trial-input",
    });
    trialInput.addEventListener("change", () => {
      this.state.trial = Math.max(0, Number(trialInput.value));
      void this.refresh();
    });

    const prev = el("button", {}, ["< window"]);
    prev.addEventListener("click", () => {
      this.windowStart = Math.max(0, this.windowStart - WINDOW_SIZE);
      void this.refresh();
    });
    const next = el("button", {}, ["window >"]);
    next.addEventListener("click", () => {
      this.windowStart += WINDOW_SIZE;
      void this.refresh();
    });

    this.header.append(channelSelect, stageSelect, trialInput, prev, next);
    this.plotArea = el("div", { class: "plot-area" });
    this.root.append(this.header, this.plotArea);
  }

  async refresh(): Promise<void> {
    if (!this.state.sessionId) return;
    const channel = this.state.channel ?? this.state.channels()[0];
    if (!channel) return;
    this.state.channel = channel;
    clear(this.plotArea);
    try {
      const win = await this.api.channelWindow(this.state.sessionId, channel, {
        stage: this.state.stage,
        trial: this.state.trial,
        from: this.windowStart,
        to: this.windowStart + WINDOW_SIZE,
      });
      this.state.refreshed("channels");
      this.renderHeader();
      const caption = el("p", { class: "caption", "data-testid": "channel-caption" }, [
        `${win.channel} · ${win.stage} · trial ${win.trial} · samples ${win.from}-${win.to}`,
      ]);
      const plot = linePlot(win.samples, { width: 800, height: 160 });
      plot.dataset.testid = "channel-plot";
      // the raw payload stays attached so nothing downstream re-derives it
      (plot as unknown as { __samples?: number[] }).__samples = win.samples;
      this.plotArea.append(caption, plot);
    } catch (err) {
      if (err instanceof ApiError) {
        this.plotArea.append(banner(`channels: ${err.status} ${err.message}`));
      } else {
        throw err;
      }
    }
  }
}
