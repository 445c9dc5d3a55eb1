import { esc, showValue } from "./html.js";
import type { HistogramPayload } from "../types.js";

/**
 * One horizontal bar per period, widths proportional to the largest value
 * in the series (bar geometry only; the displayed numbers are verbatim).
 */
export function renderHistogram(payload: HistogramPayload): string {
  const top = Math.max(...payload.series.map((point) => point.value), 0);
  const rows = payload.series
    .map((point) => {
      const percent = top > 0 && point.value > 0 ? (point.value / top) * 100 : 0;
      return (
        `<tr><th scope="row">${esc(point.period)}</th>` +
        `<td class="bar-cell"><span class="bar" style="width:${percent.toFixed(1)}%"></span>` +
        `<span class="bar-value">${esc(showValue(point.value))}</span></td></tr>`
      );
    })
    .join("");
  return (
    `<figure class="histogram">` +
    `<figcaption>${esc(payload.indicator_id)}` +
    (payload.unit ? ` (${esc(payload.unit)})` : "") +
    `</figcaption>` +
    `<table class="histogram-rows">${rows}</table>` +
    `</figure>`
  );
}
