import { renderError } from "../render/errors.js";
import { esc } from "../render/html.js";
import type { ServiceEntry, Tier } from "../types.js";

export interface CatalogState {
  services: ServiceEntry[];
  formTier: Tier;
  editing: boolean; // true = replace an existing definition (PUT)
  error: unknown | null; // inline validation error from the last submit
  notice: string | null;
}

export function emptyCatalog(): CatalogState {
  return { services: [], formTier: "index", editing: false, error: null, notice: null };
}

function listing(services: ServiceEntry[]): string {
  if (!services.length) {
    return `<p class="empty-state">Catalog is empty. Register services below or POST a pack.</p>`;
  }
  const rows = services
    .map(
      (entry) =>
        `<tr class="tier-${entry.tier}" data-id="${esc(entry.id)}">` +
        `<td><span class="tier-tag">${entry.tier}</span></td>` +
        `<td class="service-id">${esc(entry.id)}</td>` +
        `<td>${esc(entry.label)}</td><td>${esc(entry.unit)}</td></tr>`,
    )
    .join("");
  return (
    `<table class="service-table">` +
    `<thead><tr><th>tier</th><th>id</th><th>label</th><th>unit</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

function formFields(tier: Tier): string {
  const common =
    `<input name="id" placeholder="id" required>` +
    `<input name="label" placeholder="label" required>` +
    `<input name="unit" placeholder="unit" required>`;
  if (tier === "index") {
    return common + `<input name="description" placeholder="description (optional)">`;
  }
  const expression = `<input name="expression" placeholder="expression, e.g. EV / AC" required>`;
  if (tier === "model") {
    return common + expression;
  }
  return (
    common +
    expression +
    `<select name="default_mode"><option>text</option><option>gauge</option>` +
    `<option>histogram</option></select>` +
    `<textarea name="rules" rows="3" placeholder='rules, one per line: op threshold severity label` +
    `\nlt 0 bad over budget'></textarea>`
  );
}

export function renderCatalog(state: CatalogState): string {
  const tierTabs = (["index", "model", "indicator"] as Tier[])
    .map((tier) => {
      const active = tier === state.formTier ? " class=\"active\"" : "";
      return `<button type="button" data-tier="${tier}"${active}>${tier}</button>`;
    })
    .join("");
  return (
    `<section class="catalog">` +
    listing(state.services) +
    `<div class="register-box">` +
    `<div class="tier-tabs">${tierTabs}` +
    `<label class="edit-toggle"><input type="checkbox" id="catalog-edit"` +
    `${state.editing ? " checked" : ""}> replace existing</label></div>` +
    `<form id="catalog-form">${formFields(state.formTier)}` +
    `<button type="submit">${state.editing ? "Replace" : "Register"}</button></form>` +
    (state.error ? renderError(state.error) : "") +
    (state.notice ? `<p class="notice">${esc(state.notice)}</p>` : "") +
    `</div></section>`
  );
}

/** Parse the rules textarea: one rule per line, `op threshold severity label…`. */
export function parseRulesText(text: string) {
  return text
    .split("\n")
    .map((line) => line.trim())
    .filter(Boolean)
    .map((line) => {
      const [op, threshold, severity, ...labelWords] = line.split(/\s+/);
      return {
        op: op as "lt" | "le" | "gt" | "ge" | "eq",
        threshold: Number(threshold),
        severity: severity as "good" | "warning" | "bad",
        label: labelWords.join(" "),
      };
    });
}
