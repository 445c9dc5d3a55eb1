import { esc, showValue } from "./html.js";
import type { TextPayload } from "../types.js";

export function renderTextCard(payload: TextPayload): string {
  const interp = payload.interpretation;
  return (
    `<div class="text-card">` +
    `<span class="text-id">${esc(payload.indicator_id)}</span>` +
    `<span class="text-value">${esc(showValue(payload.value))}</span>` +
    (payload.unit ? `<span class="text-unit">${esc(payload.unit)}</span>` : "") +
    (interp
      ? `<span class="interp interp-${interp.severity}">${esc(interp.label)}</span>`
      : "") +
    `</div>`
  );
}
