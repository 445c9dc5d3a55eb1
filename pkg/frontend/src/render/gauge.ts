import { esc, showValue } from "./html.js";
import type { GaugePayload, Severity } from "../types.js";

const WIDTH = 320;
const TRACK_X = 10;
const TRACK_WIDTH = WIDTH - 2 * TRACK_X;
const TRACK_Y = 18;
const TRACK_HEIGHT = 22;

const SEVERITY_FILL: Record<Severity, string> = {
  good: "#2e9e44", // green
  warning: "#e8a513", // amber
  bad: "#d13f3f", // red
};

/** Map a value on [min, max] to an x pixel on the track (pure positioning). */
export function needleX(payload: GaugePayload): number {
  const pinned = Math.min(Math.max(payload.value, payload.min), payload.max);
  const fraction = (pinned - payload.min) / (payload.max - payload.min);
  return TRACK_X + fraction * TRACK_WIDTH;
}

export function renderGauge(payload: GaugePayload): string {
  const bandRects = payload.bands
    .map((band) => {
      const x = TRACK_X + ((band.lo - payload.min) / (payload.max - payload.min)) * TRACK_WIDTH;
      const w = ((band.hi - band.lo) / (payload.max - payload.min)) * TRACK_WIDTH;
      return (
        `<rect class="band band-${band.severity}" x="${x.toFixed(2)}" y="${TRACK_Y}"` +
        ` width="${w.toFixed(2)}" height="${TRACK_HEIGHT}"` +
        ` fill="${SEVERITY_FILL[band.severity]}"><title>${esc(band.label)}</title></rect>`
      );
    })
    .join("");
  const x = needleX(payload);
  const interp = payload.interpretation;
  const reading =
    `${esc(payload.indicator_id)} = ${esc(showValue(payload.value))}` +
    (payload.unit ? ` ${esc(payload.unit)}` : "") +
    (payload.clamped ? " (off scale)" : "");
  return (
    `<figure class="gauge">` +
    `<svg viewBox="0 0 ${WIDTH} 64" width="${WIDTH}" height="64" role="img"` +
    ` aria-label="${reading}">` +
    `<rect class="track" x="${TRACK_X}" y="${TRACK_Y}" width="${TRACK_WIDTH}"` +
    ` height="${TRACK_HEIGHT}" fill="#e5e2da"/>` +
    bandRects +
    `<line class="needle" x1="${x.toFixed(2)}" y1="${TRACK_Y - 6}"` +
    ` x2="${x.toFixed(2)}" y2="${TRACK_Y + TRACK_HEIGHT + 6}" stroke="#1b1b1b" stroke-width="3"/>` +
    `<text x="${TRACK_X}" y="58" class="bound">${esc(showValue(payload.min))}</text>` +
    `<text x="${WIDTH - TRACK_X}" y="58" text-anchor="end" class="bound">` +
    `${esc(showValue(payload.max))}</text>` +
    `</svg>` +
    `<figcaption>${reading}` +
    (interp
      ? ` <span class="interp interp-${interp.severity}">${esc(interp.label)}</span>`
      : "") +
    `</figcaption>` +
    `</figure>`
  );
}
