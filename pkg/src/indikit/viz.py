"""Visualization descriptors and plain-text rendering.

A descriptor is a render-ready payload for one computed indicator in one of
three modes: ``gauge`` (needle between bounds with severity bands), ``text``
(value + unit + interpretation) or ``histogram`` (one bar per period).
Descriptors are what the HTTP API ships to clients; ``render_text`` gives the
CLI a deterministic monospace rendering of the same payloads.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .expr import format_number
from .registry import InterpretationRule

__all__ = [
    "EmptySeriesError",
    "GaugeBand",
    "GaugeDescriptor",
    "TextDescriptor",
    "HistogramDescriptor",
    "VisualizationDescriptor",
    "interpret",
    "default_gauge_bounds",
    "gauge_bands",
    "make_descriptor",
    "render_text",
    "descriptor_to_wire",
]

_RULE_OPS = {
    "lt": operator.lt,
    "le": operator.le,
    "gt": operator.gt,
    "ge": operator.ge,
    "eq": operator.eq,
}

GAUGE_WIDTH = 41  # cells in the text gauge bar
HISTOGRAM_WIDTH = 40  # max bar length in the text histogram

_SEVERITY_CELLS = {"good": "=", "warning": "~", "bad": "!"}


class EmptySeriesError(Exception):
    def __init__(self, indicator_id: str):
        super().__init__(f"no data points for indicator '{indicator_id}'")
        self.indicator_id = indicator_id


def interpret(
    rules: Sequence[InterpretationRule], value: float
) -> tuple[str, str] | None:
    """First rule whose predicate holds -> (label, severity); None otherwise.

    A value exactly at a threshold matches neither ``lt`` nor ``gt``; packs
    that want to classify the boundary use ``le``/``ge`` explicitly.
    """
    for rule in rules:
        if _RULE_OPS[rule.op](value, rule.threshold):
            return rule.label, rule.severity
    return None


# ---------------------------------------------------------------------------
# Descriptors


@dataclass(frozen=True)
class GaugeBand:
    lo: float
    hi: float
    severity: str
    label: str


@dataclass(frozen=True)
class GaugeDescriptor:
    mode = "gauge"
    indicator_id: str
    value: float
    lo: float
    hi: float
    clamped: bool
    bands: tuple[GaugeBand, ...]
    unit: str = ""
    interpretation: tuple[str, str] | None = None


@dataclass(frozen=True)
class TextDescriptor:
    mode = "text"
    indicator_id: str
    value: float
    unit: str = ""
    interpretation: tuple[str, str] | None = None


@dataclass(frozen=True)
class HistogramDescriptor:
    mode = "histogram"
    indicator_id: str
    series: tuple[tuple[str, float], ...]  # (period label, value), sorted
    unit: str = ""


VisualizationDescriptor = Union[GaugeDescriptor, TextDescriptor, HistogramDescriptor]


def default_gauge_bounds(
    rules: Sequence[InterpretationRule], value: float
) -> tuple[float, float]:
    """Symmetric bounds around the rule thresholds, wide enough for the value.

    With thresholds t1..tn the center is the threshold midpoint and the half
    span doubles the largest distance of any threshold or the value from the
    center (never narrower than |center|, so ratio-style indicators with a
    single threshold at 1 get [0, 2]).  Falls back to [-1, 1] when everything
    is zero.
    """
    thresholds = [rule.threshold for rule in rules]
    center = (min(thresholds) + max(thresholds)) / 2.0 if thresholds else 0.0
    spread = max([abs(t - center) for t in thresholds] + [abs(value - center)])
    half = max(2.0 * spread, abs(center))
    if half == 0.0:
        half = 1.0
    return center - half, center + half


def gauge_bands(
    rules: Sequence[InterpretationRule], lo: float, hi: float
) -> tuple[GaugeBand, ...]:
    """Severity bands over [lo, hi] induced by first-match-wins rules.

    The thresholds cut [lo, hi] into segments; each segment takes the rule
    matched at its midpoint.  Segments matching no rule are left out (the
    "unbanded gap"), so the result partitions a subset of [lo, hi] without
    overlap.  Adjacent segments with the same outcome are merged.
    """
    points = sorted({lo, hi, *(r.threshold for r in rules if lo < r.threshold < hi)})
    bands: list[GaugeBand] = []
    for a, b in zip(points, points[1:]):
        hit = interpret(rules, (a + b) / 2.0)
        if hit is None:
            continue
        label, severity = hit
        if bands and bands[-1].hi == a and (bands[-1].severity, bands[-1].label) == (severity, label):
            bands[-1] = GaugeBand(bands[-1].lo, b, severity, label)
        else:
            bands.append(GaugeBand(a, b, severity, label))
    return tuple(bands)


def make_descriptor(
    indicator_id: str,
    mode: str,
    *,
    value: float | None = None,
    unit: str = "",
    rules: Sequence[InterpretationRule] = (),
    interpretation: tuple[str, str] | None = None,
    bounds: tuple[float, float] | None = None,
    series: Iterable[tuple[str, float]] | None = None,
) -> VisualizationDescriptor:
    """Build the descriptor for one indicator in the requested mode.

    ``gauge`` and ``text`` need ``value``; ``histogram`` needs a non-empty
    ``series`` of (period label, value) pairs.  Gauge bounds default via
    :func:`default_gauge_bounds`.  When ``interpretation`` is not given it is
    derived from ``rules``.
    """
    if mode == "text":
        if value is None:
            raise ValueError("text descriptor needs a value")
        if interpretation is None:
            interpretation = interpret(rules, value)
        return TextDescriptor(indicator_id, value, unit, interpretation)
    if mode == "gauge":
        if value is None:
            raise ValueError("gauge descriptor needs a value")
        if interpretation is None:
            interpretation = interpret(rules, value)
        lo, hi = bounds if bounds is not None else default_gauge_bounds(rules, value)
        if not lo < hi:
            raise ValueError(f"gauge bounds must satisfy lo < hi, got [{lo}, {hi}]")
        clamped = not lo <= value <= hi
        return GaugeDescriptor(
            indicator_id, value, lo, hi, clamped, gauge_bands(rules, lo, hi), unit, interpretation
        )
    if mode == "histogram":
        pairs = tuple(sorted(series or (), key=lambda item: item[0]))
        if not pairs:
            raise EmptySeriesError(indicator_id)
        return HistogramDescriptor(indicator_id, pairs, unit)
    raise ValueError(f"unknown visualization mode {mode!r}")


# ---------------------------------------------------------------------------
# Wire form


def descriptor_to_wire(descriptor: VisualizationDescriptor) -> dict:
    """Tagged ``{mode, payload}`` object, lower_snake_case keys throughout."""
    interp = getattr(descriptor, "interpretation", None)
    interp_wire = None if interp is None else {"label": interp[0], "severity": interp[1]}
    if isinstance(descriptor, TextDescriptor):
        payload = {
            "indicator_id": descriptor.indicator_id,
            "value": descriptor.value,
            "unit": descriptor.unit,
            "interpretation": interp_wire,
        }
    elif isinstance(descriptor, GaugeDescriptor):
        payload = {
            "indicator_id": descriptor.indicator_id,
            "value": descriptor.value,
            "min": descriptor.lo,
            "max": descriptor.hi,
            "clamped": descriptor.clamped,
            "bands": [
                {"lo": band.lo, "hi": band.hi, "severity": band.severity, "label": band.label}
                for band in descriptor.bands
            ],
            "unit": descriptor.unit,
            "interpretation": interp_wire,
        }
    elif isinstance(descriptor, HistogramDescriptor):
        payload = {
            "indicator_id": descriptor.indicator_id,
            "unit": descriptor.unit,
            "series": [{"period": label, "value": value} for label, value in descriptor.series],
        }
    else:
        raise TypeError(f"not a descriptor: {descriptor!r}")
    return {"mode": descriptor.mode, "payload": payload}


# ---------------------------------------------------------------------------
# Text rendering


def _headline(descriptor: GaugeDescriptor | TextDescriptor) -> str:
    line = f"{descriptor.indicator_id} = {format_number(descriptor.value)}"
    if descriptor.unit:
        line += f" {descriptor.unit}"
    if descriptor.interpretation is not None:
        line += f"  [{descriptor.interpretation[0]}]"
    return line


def render_text(descriptor: VisualizationDescriptor) -> list[str]:
    """Deterministic monospace rendering, one list entry per output line."""
    if isinstance(descriptor, TextDescriptor):
        return [_headline(descriptor)]
    if isinstance(descriptor, GaugeDescriptor):
        lo, hi = descriptor.lo, descriptor.hi
        span = hi - lo
        cells = []
        for k in range(GAUGE_WIDTH):
            hit = interpret_bands(descriptor.bands, lo + k * span / (GAUGE_WIDTH - 1))
            cells.append(_SEVERITY_CELLS.get(hit, "."))
        pinned = min(max(descriptor.value, lo), hi)
        needle = round((pinned - lo) / span * (GAUGE_WIDTH - 1))
        cells[needle] = "*"
        head = _headline(descriptor)
        if descriptor.clamped:
            head += " (clamped)"
        bar = f"{format_number(lo)} [{''.join(cells)}] {format_number(hi)}"
        return [head, bar]
    if isinstance(descriptor, HistogramDescriptor):
        head = descriptor.indicator_id + (f" ({descriptor.unit})" if descriptor.unit else "")
        lines = [head]
        label_width = max(len(label) for label, _ in descriptor.series)
        top = max(value for _, value in descriptor.series)
        for label, value in descriptor.series:
            length = round(value / top * HISTOGRAM_WIDTH) if top > 0 and value > 0 else 0
            lines.append(f"{label.ljust(label_width)} |{'#' * length} {format_number(value)}")
        return lines
    raise TypeError(f"not a descriptor: {descriptor!r}")


def interpret_bands(bands: Sequence[GaugeBand], value: float) -> str | None:
    """Severity of the band containing ``value`` (upper bound exclusive except
    for the last band), or None in the unbanded gap."""
    for index, band in enumerate(bands):
        if band.lo <= value < band.hi or (index == len(bands) - 1 and value == band.hi):
            return band.severity
    return None
