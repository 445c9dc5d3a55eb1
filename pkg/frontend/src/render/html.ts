/** Escape text destined for an HTML context. */
export function esc(text: unknown): string {
  return String(text)
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

/** Indicator values are shown exactly as received from the API. */
export function showValue(value: number): string {
  return String(value);
}
