/**
 * SVG line plots. Long series are thinned with min-max decimation so plotting
 * stays cheap, but only for display geometry: exports and assertions always
 * use the raw payload, and the decimation keeps every bucket's extremes so
 * spikes stay visible.
 */

export function decimateMinMax(samples: number[], maxPoints: number): number[] {
  if (samples.length <= maxPoints || maxPoints < 4) {
    return samples.slice();
  }
  const buckets = Math.floor(maxPoints / 2);
  const out: number[] = [];
  const step = samples.length / buckets;
  for (let b = 0; b < buckets; b++) {
    const start = Math.floor(b * step);
    const end = Math.min(samples.length, Math.max(start + 1, Math.floor((b + 1) * step)));
    let lo = samples[start];
    let hi = samples[start];
    let loAt = start;
    let hiAt = start;
    for (let i = start + 1; i < end; i++) {
      if (samples[i] < lo) {
        lo = samples[i];
        loAt = i;
      }
      if (samples[i] > hi) {
        hi = samples[i];
        hiAt = i;
      }
    }
    // keep temporal order inside the bucket
    out.push(loAt <= hiAt ? lo : hi, loAt <= hiAt ? hi : lo);
  }
  return out;
}

export interface PlotOptions {
  width?: number;
  height?: number;
  maxPoints?: number;
  color?: string;
  xValues?: number[];
  xLabel?: string;
}

const SVG_NS = "http://www.w3.org/2000/svg";

export function linePlot(samples: number[], opts: PlotOptions = {}): SVGSVGElement {
  const width = opts.width ?? 640;
  const height = opts.height ?? 120;
  const svg = document.createElementNS(SVG_NS, "svg") as SVGSVGElement;
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  svg.setAttribute("class", "line-plot");
  svg.dataset.sampleCount = String(samples.length);

  const shown = decimateMinMax(samples, opts.maxPoints ?? 1200);
  if (shown.length === 0) {
    return svg;
  }
  let lo = Math.min(...shown);
  let hi = Math.max(...shown);
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const pad = 4;
  const sx = (width - 2 * pad) / Math.max(shown.length - 1, 1);
  const sy = (height - 2 * pad) / (hi - lo);
  const points = shown
    .map((v, i) => `${(pad + i * sx).toFixed(2)},${(height - pad - (v - lo) * sy).toFixed(2)}`)
    .join(" ");
  const line = document.createElementNS(SVG_NS, "polyline");
  line.setAttribute("points", points);
  line.setAttribute("fill", "none");
  line.setAttribute("stroke", opts.color ?? "#1f6feb");
  line.setAttribute("stroke-width", "1");
  svg.appendChild(line);
  return svg;
}
