/**
 * Rhythm-band reconstruction plus the channel's one-sided power spectrum,
 * side by side. Both plots draw exactly what the service returns; the client
 * does no signal processing of its own.
 */

import { ApiClient, ApiError } from "../api.js";
import { banner, clear, el, numberText, staleBadge } from "../dom.js";
import { linePlot } from "../plot.js";
import type { ViewState } from "../state.js";

export const BAND_NAMES = ["delta", "theta", "alpha", "beta", "gamma"] as const;

export class BandSpectrumView {
  readonly root: HTMLElement;
  band: (typeof BAND_NAMES)[number] = "alpha";

  constructor(
    private api: ApiClient,
    private state: ViewState,
  ) {
    this.root = el("section", { class: "view bands-view", "data-view": "bands" });
  }

  async refresh(): Promise<void> {
    if (!this.state.sessionId) return;
    const channel = this.state.channel ?? this.state.channels()[0];
    if (!channel) return;
    clear(this.root);

    const header = el("div", { class: "view-header" }, [el("h2", {}, ["Bands & spectrum"])]);
    if (this.state.isStale("bands")) header.append(staleBadge());
    const bandSelect = el("select", { "data-testid": "band-select" });
    for (const name of BAND_NAMES) {
      bandSelect.append(el("option", { value: name }, [name]));
    }
    bandSelect.value = this.band;
    bandSelect.addEventListener("change", () => {
      this.band = bandSelect.value as (typeof BAND_NAMES)[number];
      void this.refresh();
    });
    header.append(bandSelect);
    this.root.append(header);

    try {
      const [band, spectrum] = await Promise.all([
        this.api.bandView(this.state.sessionId, this.band, channel, {
          trial: this.state.trial,
        }),
        this.api.spectrum(this.state.sessionId, channel, { trial: this.state.trial }),
      ]);
      this.state.refreshed("bands");

      const high = band.nominal_range_hz[1];
      const nominal = high === null ? `${band.nominal_range_hz[0]}+` : `${band.nominal_range_hz[0]}-${high}`;
      const caption = el("p", { class: "caption", "data-testid": "band-caption" }, [
        `${band.band} on ${band.channel}: clinical ${nominal} Hz, ` +
          `reconstructed from ${numberText(band.dyadic_range_hz[0])}-` +
          `${numberText(band.dyadic_range_hz[1])} Hz`,
      ]);
      const bandPlot = linePlot(band.samples, { width: 800, height: 120 });
      bandPlot.dataset.testid = "band-plot";

      const peak = el("p", { "data-testid": "spectrum-peak" }, [
        `spectrum peak at `,
        el("span", { "data-testid": "peak-hz" }, [numberText(spectrum.peak_frequency_hz)]),
        ` Hz`,
      ]);
      const spectrumPlot = linePlot(spectrum.power, {
        width: 800,
        height: 120,
        color: "#cf222e",
        xValues: spectrum.frequencies_hz,
      });
      spectrumPlot.dataset.testid = "spectrum-plot";

      this.root.append(caption, bandPlot, peak, spectrumPlot);
    } catch (err) {
      if (err instanceof ApiError) {
        this.root.append(banner(`bands: ${err.status} ${err.message}`));
      } else {
        throw err;
      }
    }
  }
}
