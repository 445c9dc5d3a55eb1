// Contract tests against recorded API responses: the dashboard renders
// descriptor fields exactly as received and never recomputes indicator math.
import { describe, expect, it } from "vitest";

import { needleX, renderGauge } from "../src/render/gauge.js";
import { renderDescriptor, renderDashboard, emptyDashboard } from "../src/screens/dashboard.js";
import type { BatchEntry, Descriptor, GaugePayload, IndicatorReport } from "../src/types.js";

import reportCvGauge from "./fixtures/report_cv_gauge.json";
import reportCvText from "./fixtures/report_cv_text.json";
import reportsBatch from "./fixtures/reports_batch.json";
import seriesCv from "./fixtures/series_cv.json";

const cvReport = reportCvGauge as unknown as IndicatorReport;
const gauge = cvReport.descriptor.payload as GaugePayload;

describe("CV gauge from the recorded report", () => {
  it("places the needle at -50 between -100 and 100", () => {
    // pure positioning from received min/max/value: 25% across the track
    const x = needleX(gauge);
    expect(x).toBeCloseTo(10 + 0.25 * 300, 10);
    const svg = renderGauge(gauge);
    expect(svg).toContain(`x1="${x.toFixed(2)}"`);
  });

  it("shows the 'over budget' band in the bad color", () => {
    const svg = renderGauge(gauge);
    expect(svg).toContain("<title>over budget</title>");
    expect(svg).toMatch(/band-bad[^>]*fill="#d13f3f"/);
  });

  it("renders the value verbatim, no client-side arithmetic", () => {
    const svg = renderGauge(gauge);
    expect(svg).toContain(`CV = ${String(gauge.value)}`);
    expect(svg).toContain(String(gauge.min));
    expect(svg).toContain(String(gauge.max));
  });

  it("labels the interpretation with its severity", () => {
    const svg = renderGauge(gauge);
    expect(svg).toContain(`<span class="interp interp-bad">over budget</span>`);
  });
});

describe("other descriptor modes from recorded responses", () => {
  it("renders the text card verbatim", () => {
    const descriptor = (reportCvText as unknown as IndicatorReport).descriptor;
    const html = renderDescriptor(descriptor);
    expect(html).toContain(">CV<");
    expect(html).toContain(">-50<");
    expect(html).toContain("currency");
    expect(html).toContain("over budget");
  });

  it("renders the histogram series in period order with proportional bars", () => {
    const descriptor = seriesCv as unknown as Descriptor;
    const html = renderDescriptor(descriptor);
    const order = ["2024-01", "2024-02", "2024-03"].map((p) => html.indexOf(p));
    expect(order).toEqual([...order].sort((a, b) => a - b));
    expect(order[0]).toBeGreaterThan(-1);
    // widths scale against the received maximum, values shown verbatim
    if (descriptor.mode === "histogram") {
      const top = Math.max(...descriptor.payload.series.map((point) => point.value));
      for (const point of descriptor.payload.series) {
        expect(html).toContain(String(point.value));
        if (point.value > 0) {
          expect(html).toContain(`width:${((point.value / top) * 100).toFixed(1)}%`);
        }
      }
    }
  });
});

describe("dashboard screen", () => {
  it("shows ok cards and a distinct error card from one recorded batch", () => {
    const state = emptyDashboard([
      { tier: "indicator", id: "CV", label: "Cost Variance", unit: "currency" },
    ]);
    state.entries = (reportsBatch as { entries: BatchEntry[] }).entries;
    state.period = "2024-03";
    const html = renderDashboard(state);
    expect(html).toContain("CV");
    expect(html).toContain("report-failed"); // the NOPE entry
    expect(html).toContain("NOT FOUND");
    expect(html).toContain("no indicator registered with id &#39;NOPE&#39;");
  });

  it("renders an empty-state prompt with no indicators and makes no request", () => {
    const html = renderDashboard(emptyDashboard([]));
    expect(html).toContain("No indicators registered yet");
    expect(html).not.toContain("dashboard-form"); // nothing to submit, no request storm
  });
});
