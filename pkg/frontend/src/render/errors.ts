import { ApiError } from "../api.js";
import { esc } from "./html.js";
import type { ApiErrorCode } from "../types.js";

// One distinct presentation per machine code: badge text, accent class and
// a short operator hint.  The verbatim server message is always shown too.
export const ERROR_PRESENTATION: Record<ApiErrorCode, { badge: string; hint: string }> = {
  duplicate_id: { badge: "DUPLICATE ID", hint: "That id is already taken; ids are global across tiers." },
  unknown_dependency: { badge: "UNKNOWN DEPENDENCY", hint: "The formula references ids that are not registered." },
  cycle: { badge: "DEPENDENCY CYCLE", hint: "This change would make the model graph circular." },
  unknown_id: { badge: "NOT FOUND", hint: "No service is registered under that id." },
  missing_value: { badge: "NO DATA", hint: "Enter index values for this period first." },
  evaluation_error: { badge: "EVALUATION FAILED", hint: "The formula could not be computed from the stored data." },
  bad_request: { badge: "INVALID INPUT", hint: "The request was malformed; check the fields." },
};

export function renderError(error: unknown): string {
  if (error instanceof ApiError) {
    const look = ERROR_PRESENTATION[error.code] ?? ERROR_PRESENTATION.bad_request;
    const ids = error.ids.length
      ? `<span class="error-ids">${error.ids.map(esc).join(", ")}</span>`
      : "";
    return (
      `<div class="error error-${esc(error.code)}" role="alert">` +
      `<span class="error-badge">${esc(look.badge)}</span> ` +
      `<span class="error-message">${esc(error.message)}</span> ${ids}` +
      `<div class="error-hint">${esc(look.hint)}</div>` +
      `</div>`
    );
  }
  const message = error instanceof Error ? error.message : String(error);
  return `<div class="error error-unreachable" role="alert">` +
    `<span class="error-badge">UNREACHABLE</span> ` +
    `<span class="error-message">${esc(message)}</span></div>`;
}
