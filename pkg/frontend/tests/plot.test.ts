import { describe, expect, it } from "vitest";

import { decimateMinMax, linePlot } from "../src/plot.js";

describe("decimateMinMax", () => {
  it("returns short series untouched", () => {
    const x = [3, 1, 4, 1, 5];
    expect(decimateMinMax(x, 100)).toEqual(x);
  });

  it("stays within the point budget", () => {
    const x = Array.from({ length: 10_000 }, (_, i) => Math.sin(i / 7));
    expect(decimateMinMax(x, 500).length).toBeLessThanOrEqual(500);
  });

  it("keeps global extremes visible", () => {
    const x = Array.from({ length: 5_000 }, (_, i) => Math.sin(i / 11));
    x[1234] = 42;
    x[4321] = -42;
    const thin = decimateMinMax(x, 200);
    expect(Math.max(...thin)).toBe(42);
    expect(Math.min(...thin)).toBe(-42);
  });

  it("preserves values, inventing nothing", () => {
    const x = Array.from({ length: 999 }, (_, i) => (i * 31) % 17);
    const allowed = new Set(x);
    for (const v of decimateMinMax(x, 64)) {
      expect(allowed.has(v)).toBe(true);
    }
  });
});

describe("linePlot", () => {
  it("renders an svg polyline and records the true sample count", () => {
    const svg = linePlot([0, 1, 0, -1, 0]);
    expect(svg.tagName.toLowerCase()).toBe("svg");
    expect(svg.dataset.sampleCount).toBe("5");
    expect(svg.querySelector("polyline")).not.toBeNull();
  });

  it("handles constant and empty input", () => {
    expect(linePlot([2, 2, 2]).querySelector("polyline")).not.toBeNull();
    expect(linePlot([]).querySelector("polyline")).toBeNull();
  });
});
