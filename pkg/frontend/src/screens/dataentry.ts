import { renderError } from "../render/errors.js";
import { esc } from "../render/html.js";
import type { ServiceEntry } from "../types.js";

export interface DataEntryState {
  indices: ServiceEntry[];
  period: string;
  // id -> entered text for the grid inputs (kept across renders)
  drafts: Record<string, string>;
  error: unknown | null;
  notice: string | null;
}

export function emptyDataEntry(indices: ServiceEntry[] = []): DataEntryState {
  return { indices, period: "", drafts: {}, error: null, notice: null };
}

export function renderDataEntry(state: DataEntryState): string {
  if (!state.indices.length) {
    return `<section class="data-entry empty-state">` +
      `<p>No indices registered; nothing to enter data for.</p></section>`;
  }
  const rows = state.indices
    .map(
      (entry) =>
        `<tr><th scope="row">${esc(entry.id)}</th><td>${esc(entry.unit)}</td>` +
        `<td><input name="value-${esc(entry.id)}" inputmode="decimal"` +
        ` value="${esc(state.drafts[entry.id] ?? "")}" placeholder="value"></td></tr>`,
    )
    .join("");
  return (
    `<section class="data-entry">` +
    `<form id="data-form">` +
    `<input name="period" placeholder="period (2024-03)" value="${esc(state.period)}" required>` +
    `<table class="value-grid">` +
    `<thead><tr><th>index</th><th>unit</th><th>value for the period</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>` +
    `<button type="submit">Save entered values</button>` +
    `</form>` +
    `<form id="csv-form" class="csv-box">` +
    `<textarea name="csv" rows="5" placeholder="index_id,period,value` +
    `\nEV,2024-03,400"></textarea>` +
    `<button type="submit">Upload CSV</button>` +
    `</form>` +
    (state.error ? renderError(state.error) : "") +
    (state.notice ? `<p class="notice">${esc(state.notice)}</p>` : "") +
    `</section>`
  );
}

/** Split CSV text into value rows; numbers are sent as typed, not computed. */
export function parseCsvText(text: string): { indexId: string; period: string; value: number }[] {
  const lines = text.split("\n").map((line) => line.trim()).filter(Boolean);
  if (!lines.length) return [];
  const start = lines[0].toLowerCase().startsWith("index_id") ? 1 : 0;
  return lines.slice(start).map((line, offset) => {
    const cells = line.split(",").map((cell) => cell.trim());
    if (cells.length !== 3 || Number.isNaN(Number(cells[2]))) {
      throw new Error(`CSV line ${start + offset + 1}: expected 'index_id,period,value'`);
    }
    return { indexId: cells[0], period: cells[1], value: Number(cells[2]) };
  });
}
