// The anomaly screen is fed by a 5 s poller; a failure provoked on the
// backend must show up within one poll interval.
import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { Poller } from "../src/poller.js";
import { renderAnomalies } from "../src/screens/anomalies.js";
import type { AnomalyRecord } from "../src/types.js";
import { fetchSequence } from "./helpers.js";

import anomaliesEmpty from "./fixtures/anomalies_empty.json";
import anomaliesAfter from "./fixtures/anomalies_after.json";

const EMPTY = anomaliesEmpty as AnomalyRecord[];
const AFTER = anomaliesAfter as AnomalyRecord[];

describe("anomaly polling", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("shows a provoked validation failure within one poll interval", async () => {
    // first poll sees a clean log, the next one the recorded post-failure log
    const { fetch } = fetchSequence([{ body: EMPTY }, { body: AFTER }]);
    const api = new ApiClient("", fetch);

    let screen = "";
    const poller = new Poller(async () => {
      screen = renderAnomalies(await api.getAnomalies(), "");
    });
    poller.start();
    await vi.advanceTimersByTimeAsync(0);
    expect(screen).toContain("No anomalies");
    expect(screen).not.toContain("unknown dependencies: ghost");

    await vi.advanceTimersByTimeAsync(poller.intervalMs); // exactly one interval
    poller.stop();
    expect(screen).toContain("unknown dependencies: ghost");
    expect(screen).toContain("validation");
  });

  it("keeps polling on the interval until stopped", async () => {
    const { fetch, calls } = fetchSequence([{ body: EMPTY }]);
    const api = new ApiClient("", fetch);
    const poller = new Poller(async () => void (await api.getAnomalies()));
    poller.start();
    await vi.advanceTimersByTimeAsync(15_000);
    poller.stop();
    await vi.advanceTimersByTimeAsync(30_000);
    expect(calls.length).toBe(4); // immediate + 3 intervals, none after stop
  });
});

describe("anomaly screen rendering", () => {
  it("renders records in sequence order with category tags", () => {
    const html = renderAnomalies(AFTER, "");
    const positions = AFTER.map((record) => html.indexOf(`data-seq="${record.seq}"`));
    expect(positions).toEqual([...positions].sort((a, b) => a - b));
    expect(html).toContain("category-tag");
  });

  it("filters by category client-side", () => {
    const records: AnomalyRecord[] = [
      { ...AFTER[0], seq: 1, category: "validation" },
      { ...AFTER[0], seq: 2, category: "evaluation", detail: "division by zero in 'EV / AC'" },
    ];
    const html = renderAnomalies(records, "evaluation");
    expect(html).toContain("division by zero");
    expect(html).not.toContain('data-seq="1"');
  });
});
