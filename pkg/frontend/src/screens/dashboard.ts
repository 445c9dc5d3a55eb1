import { renderError } from "../render/errors.js";
import { renderGauge } from "../render/gauge.js";
import { renderHistogram } from "../render/histogram.js";
import { renderTextCard } from "../render/textcard.js";
import { esc } from "../render/html.js";
import { ApiError } from "../api.js";
import type { BatchEntry, Descriptor, Mode, ServiceEntry } from "../types.js";

export interface DashboardState {
  indicators: ServiceEntry[]; // catalog listing, indicator tier
  selected: string[];
  period: string;
  mode: Mode | ""; // "" = each indicator's default
  from: string; // histogram range
  to: string;
  entries: BatchEntry[] | null; // last POST /reports result
  series: { id: string; descriptor: Descriptor }[] | null; // last histogram fetch
  error: unknown | null;
}

export function emptyDashboard(indicators: ServiceEntry[] = []): DashboardState {
  return {
    indicators,
    selected: [],
    period: "",
    mode: "",
    from: "",
    to: "",
    entries: null,
    series: null,
    error: null,
  };
}

export function renderDescriptor(descriptor: Descriptor): string {
  switch (descriptor.mode) {
    case "gauge":
      return renderGauge(descriptor.payload);
    case "text":
      return renderTextCard(descriptor.payload);
    case "histogram":
      return renderHistogram(descriptor.payload);
  }
}

function renderEntry(entry: BatchEntry): string {
  if (entry.status === "ok" && entry.report) {
    return `<article class="report-card">${renderDescriptor(entry.report.descriptor)}</article>`;
  }
  const error = entry.error
    ? new ApiError(0, entry.error.code, entry.error.message, entry.error.ids)
    : new Error(`indicator ${entry.indicator_id} failed`);
  return `<article class="report-card report-failed">` +
    `<h4>${esc(entry.indicator_id)}</h4>${renderError(error)}</article>`;
}

export function renderDashboard(state: DashboardState): string {
  if (state.indicators.length === 0) {
    return `<section class="dashboard empty-state">` +
      `<p>No indicators registered yet. Load a pack or add definitions on the` +
      ` Catalog screen, then come back.</p></section>`;
  }
  const picker = state.indicators
    .map((entry) => {
      const checked = state.selected.includes(entry.id) ? " checked" : "";
      return (
        `<label class="pick"><input type="checkbox" name="indicator"` +
        ` value="${esc(entry.id)}"${checked}> ${esc(entry.id)}` +
        ` <small>${esc(entry.label)}</small></label>`
      );
    })
    .join("");
  const modes: (Mode | "")[] = ["", "gauge", "text", "histogram"];
  const modePicker = modes
    .map((mode) => {
      const selected = state.mode === mode ? " selected" : "";
      return `<option value="${mode}"${selected}>${mode === "" ? "default" : mode}</option>`;
    })
    .join("");
  const cards =
    state.mode === "histogram"
      ? (state.series ?? [])
          .map((s) => `<article class="report-card">${renderDescriptor(s.descriptor)}</article>`)
          .join("")
      : (state.entries ?? []).map(renderEntry).join("");
  const rangeInputs =
    `<input name="from" placeholder="from (2024-01)" value="${esc(state.from)}">` +
    `<input name="to" placeholder="to (2024-06)" value="${esc(state.to)}">`;
  return (
    `<section class="dashboard">` +
    `<form id="dashboard-form" class="controls">` +
    `<fieldset class="picker">${picker}</fieldset>` +
    `<input name="period" placeholder="period (2024-03)" value="${esc(state.period)}">` +
    `<select name="mode">${modePicker}</select>` +
    (state.mode === "histogram" ? rangeInputs : "") +
    `<button type="submit">Compute</button>` +
    `</form>` +
    (state.error ? renderError(state.error) : "") +
    `<div class="cards">${cards}</div>` +
    `</section>`
  );
}
