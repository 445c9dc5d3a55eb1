import { esc } from "../render/html.js";
import type { AnomalyRecord } from "../types.js";

export type CategoryFilter = "" | AnomalyRecord["category"];

export function renderAnomalies(records: AnomalyRecord[], filter: CategoryFilter): string {
  const visible = filter ? records.filter((record) => record.category === filter) : records;
  const options = ["", "validation", "evaluation", "protocol"]
    .map((category) => {
      const selected = filter === category ? " selected" : "";
      const label = category === "" ? "all categories" : category;
      return `<option value="${category}"${selected}>${label}</option>`;
    })
    .join("");
  const rows = visible
    .map(
      (record) =>
        `<tr class="anomaly anomaly-${record.category}" data-seq="${record.seq}">` +
        `<td>${record.seq}</td>` +
        `<td><span class="category-tag">${record.category}</span></td>` +
        `<td>${esc(record.source)}</td>` +
        `<td>${esc(record.detail)}</td>` +
        `<td class="timestamp">${esc(record.timestamp)}</td></tr>`,
    )
    .join("");
  const body = visible.length
    ? `<table class="anomaly-table">` +
      `<thead><tr><th>#</th><th>category</th><th>source</th><th>detail</th><th>when</th></tr></thead>` +
      `<tbody>${rows}</tbody></table>`
    : `<p class="empty-state">No anomalies${filter ? ` in category ${filter}` : ""}. All clear.</p>`;
  return (
    `<section class="anomalies">` +
    `<div class="controls"><select id="anomaly-filter">${options}</select>` +
    `<span class="poll-note">refreshes every 5 s</span></div>` +
    body +
    `</section>`
  );
}
