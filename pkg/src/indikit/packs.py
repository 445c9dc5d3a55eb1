"""Built-in decision packs and the pack document format.

A pack bundles the index/model/indicator definitions for one decision domain
into a single JSON document (human-editable, diff-able).  Two packs ship with
the library:

* :func:`evm_pack` -- earned-value project control (PV/EV/AC inputs, CPI and
  SPI performance ratios, the EAC/ETC/VAC completion forecasts);
* :func:`turc_pack` -- Turc potential evapotranspiration for moderate
  climates, with the Angstrom estimate of solar radiation and the standard
  solar-geometry intermediates (inverse distance factor, declination, sunset
  hour angle).

Model and indicator entries keep their formulas as source text; they are
parsed and validated when the pack is installed into a catalog.  A pack
document may also carry a ``values`` section (used by the CLI state file) so
that one format serves definitions and data alike.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .expr import ExpressionError, free_variables, parse
from .registry import (
    MODES,
    CycleDetectedError,
    DuplicateIdError,
    IndexDefinition,
    IndexValue,
    InterpretationRule,
    PeriodFormatError,
    PeriodKey,
)

__all__ = [
    "PACK_SCHEMA_VERSION",
    "Pack",
    "ModelEntry",
    "IndicatorEntry",
    "PackFormatError",
    "evm_pack",
    "turc_pack",
    "pack_to_document",
    "pack_from_document",
    "save_pack",
    "load_pack",
    "index_definition_from_doc",
    "model_entry_from_doc",
    "indicator_entry_from_doc",
    "value_from_doc",
    "model_install_order",
]

PACK_SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class ModelEntry:
    id: str
    label: str
    expression: str  # source text, parsed at install time
    unit: str


@dataclass(frozen=True)
class IndicatorEntry:
    id: str
    label: str
    expression: str
    unit: str
    default_mode: str = "text"
    rules: tuple[InterpretationRule, ...] = ()


@dataclass(frozen=True)
class Pack:
    name: str
    version: str
    indices: tuple[IndexDefinition, ...] = ()
    models: tuple[ModelEntry, ...] = ()
    indicators: tuple[IndicatorEntry, ...] = ()
    values: tuple[IndexValue, ...] = ()


class PackFormatError(Exception):
    def __init__(self, location: str, problem: str):
        super().__init__(f"{location}: {problem}")
        self.location = location
        self.problem = problem


# ---------------------------------------------------------------------------
# Built-in packs


def _rule(op: str, threshold: float, label: str, severity: str) -> InterpretationRule:
    return InterpretationRule(op, threshold, label, severity)


def evm_pack() -> Pack:
    """Earned-value project-control pack."""
    indices = (
        IndexDefinition("PV", "Planned Value", "currency",
                        "budgeted cost of the work scheduled to date"),
        IndexDefinition("EV", "Earned Value", "currency",
                        "budgeted cost of the work actually performed"),
        IndexDefinition("AC", "Actual Cost", "currency",
                        "cost actually incurred for the work performed"),
        IndexDefinition("BAC", "Budget at Completion", "currency",
                        "total budget for the full scope"),
        IndexDefinition("ETC_INPUT", "Estimate to Complete (manual)", "currency",
                        "re-estimated remaining cost, entered when the original plan "
                        "is no longer trusted"),
    )
    models = (
        ModelEntry("CPI", "Cost Performance Index", "EV / AC", "ratio"),
        ModelEntry("SPI", "Schedule Performance Index", "EV / PV", "ratio"),
        ModelEntry("EAC_CPI", "Estimate at Completion (performance-based)",
                   "BAC / CPI", "currency"),
        ModelEntry("EAC_REESTIMATE", "Estimate at Completion (re-estimated remainder)",
                   "AC + ETC_INPUT", "currency"),
        ModelEntry("EAC_ATYPICAL", "Estimate at Completion (variances atypical)",
                   "AC + BAC - EV", "currency"),
        ModelEntry("EAC_TYPICAL", "Estimate at Completion (variances typical)",
                   "AC + (BAC - EV) / CPI", "currency"),
    )
    indicators = (
        IndicatorEntry("CV", "Cost Variance", "EV - AC", "currency", "text",
                       (_rule("lt", 0, "over budget", "bad"),
                        _rule("gt", 0, "under budget", "good"))),
        IndicatorEntry("SV", "Schedule Variance", "EV - PV", "currency", "text",
                       (_rule("lt", 0, "behind schedule", "bad"),
                        _rule("gt", 0, "ahead of schedule", "good"))),
        IndicatorEntry("CPI_I", "Cost Performance Index", "CPI", "ratio", "gauge",
                       (_rule("lt", 1, "under-performing on cost", "warning"),
                        _rule("ge", 1, "on or under cost", "good"))),
        IndicatorEntry("SPI_I", "Schedule Performance Index", "SPI", "ratio", "gauge",
                       (_rule("lt", 1, "under-performing on schedule", "warning"),
                        _rule("ge", 1, "on or ahead of schedule", "good"))),
        IndicatorEntry("EAC_I", "Estimate at Completion", "EAC_CPI", "currency", "text"),
        IndicatorEntry("ETC", "Estimate to Complete", "EAC_CPI - AC", "currency", "text"),
        IndicatorEntry("VAC", "Variance at Completion", "BAC - EAC_CPI", "currency", "text",
                       (_rule("lt", 0, "over budget at completion", "bad"),)),
        IndicatorEntry("EAC_REESTIMATE_I", "Estimate at Completion (re-estimated remainder)",
                       "EAC_REESTIMATE", "currency", "text"),
        IndicatorEntry("EAC_ATYPICAL_I", "Estimate at Completion (variances atypical)",
                       "EAC_ATYPICAL", "currency", "text"),
        IndicatorEntry("EAC_TYPICAL_I", "Estimate at Completion (variances typical)",
                       "EAC_TYPICAL", "currency", "text"),
    )
    return Pack("earned-value", PACK_SCHEMA_VERSION, indices, models, indicators)


def turc_pack() -> Pack:
    """Turc potential-evapotranspiration pack (moderate climates)."""
    indices = (
        IndexDefinition("T", "mean air temperature", "°C",
                        "mean air temperature over the period"),
        IndexDefinition("Ra", "extraterrestrial radiation", "calcm-2 J",
                        "top-of-atmosphere solar radiation for the site and period "
                        "(input; unit string recorded as provided)"),
        IndexDefinition("n", "actual sunshine duration", "hours",
                        "measured bright-sunshine hours over the period"),
        IndexDefinition("N", "maximum possible sunshine duration", "hours",
                        "astronomical day length summed over the period"),
        IndexDefinition("J", "day of year", "day-of-year", "1..365, drives solar geometry"),
        IndexDefinition("lat", "site latitude", "degrees", "positive north"),
        IndexDefinition("a_coef", "Angstrom intercept", "dimensionless",
                        "regression intercept of the sunshine-radiation relation; "
                        "0.25 by convention where uncalibrated"),
        IndexDefinition("b_coef", "Angstrom slope", "dimensionless",
                        "regression slope of the sunshine-radiation relation; "
                        "0.50 by convention where uncalibrated"),
    )
    models = (
        ModelEntry("phi", "latitude in radians", "lat * pi / 180", "rad"),
        ModelEntry("dr", "inverse relative earth-sun distance",
                   "1 + 0.033 * cos(2 * pi / 365 * J)", "dimensionless"),
        ModelEntry("delta", "solar declination",
                   "0.409 * sin(2 * pi / 365 * J - 1.39)", "rad"),
        ModelEntry("omega_s", "sunset hour angle",
                   "arccos(-tan(phi) * tan(delta))", "rad"),
        ModelEntry("Rs", "incoming solar radiation (Angstrom estimate)",
                   "Ra * (a_coef + b_coef * n / N)", "calcm-2 J"),
    )
    indicators = (
        IndicatorEntry("Rs_daily", "solar radiation (daily)", "Rs", "calcm-2 J", "text"),
        IndicatorEntry("Rs_decadal", "solar radiation (decadal)", "Rs", "calcm-2 J", "text"),
        IndicatorEntry("T_decadal", "mean temperature (decadal)", "T", "°C", "text"),
        IndicatorEntry("ET_decadal", "potential evapotranspiration (decadal)",
                       "0.13 * (Rs + 50) * T / (T + 15)", "mm/decade", "text"),
        IndicatorEntry("ET_monthly", "potential evapotranspiration (monthly)",
                       "0.4 * (Rs + 50) * T / (T + 15)", "mm/month", "text"),
    )
    return Pack("turc-evapotranspiration", PACK_SCHEMA_VERSION, indices, models, indicators)


# ---------------------------------------------------------------------------
# Document form


def require_key(doc: Any, key: str, kind: type | tuple[type, ...], where: str) -> Any:
    if not isinstance(doc, dict):
        raise PackFormatError(where, f"expected an object, got {type(doc).__name__}")
    if key not in doc:
        raise PackFormatError(where, f"missing key '{key}'")
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise PackFormatError(f"{where}.{key}", f"expected {kind}, got {type(value).__name__}")
    return value


def index_definition_from_doc(doc: Any, where: str = "index") -> IndexDefinition:
    definition = IndexDefinition(
        require_key(doc, "id", str, where),
        require_key(doc, "label", str, where),
        require_key(doc, "unit", str, where),
        str(doc.get("description", "")),
    )
    return definition


def model_entry_from_doc(doc: Any, where: str = "model") -> ModelEntry:
    return ModelEntry(
        require_key(doc, "id", str, where),
        require_key(doc, "label", str, where),
        require_key(doc, "expression", str, where),
        require_key(doc, "unit", str, where),
    )


def _rule_from_doc(doc: Any, where: str) -> InterpretationRule:
    op = require_key(doc, "op", str, where)
    threshold = require_key(doc, "threshold", (int, float), where)
    label = require_key(doc, "label", str, where)
    severity = require_key(doc, "severity", str, where)
    try:
        return InterpretationRule(op, float(threshold), label, severity)
    except ValueError as exc:
        raise PackFormatError(where, str(exc)) from None


def indicator_entry_from_doc(doc: Any, where: str = "indicator") -> IndicatorEntry:
    mode = doc.get("default_mode", "text") if isinstance(doc, dict) else "text"
    if mode not in MODES:
        raise PackFormatError(f"{where}.default_mode", f"unknown mode {mode!r}")
    raw_rules = doc.get("rules", []) if isinstance(doc, dict) else []
    if not isinstance(raw_rules, list):
        raise PackFormatError(f"{where}.rules", "expected a list")
    rules = tuple(
        _rule_from_doc(rule, f"{where}.rules[{i}]") for i, rule in enumerate(raw_rules)
    )
    return IndicatorEntry(
        require_key(doc, "id", str, where),
        require_key(doc, "label", str, where),
        require_key(doc, "expression", str, where),
        require_key(doc, "unit", str, where),
        mode,
        rules,
    )


def value_from_doc(doc: Any, where: str = "value") -> IndexValue:
    index_id = require_key(doc, "index_id", str, where)
    label = require_key(doc, "period", str, where)
    value = require_key(doc, "value", (int, float), where)
    try:
        period = PeriodKey.from_label(label)
    except PeriodFormatError as exc:
        raise PackFormatError(f"{where}.period", str(exc)) from None
    return IndexValue(index_id, period, float(value))


def pack_from_document(doc: Any) -> Pack:
    """Validate a parsed JSON document into a :class:`Pack`.

    Raises :class:`PackFormatError` naming the offending entry.
    """
    name = require_key(doc, "name", str, "pack")
    version = require_key(doc, "version", str, "pack")

    def section(key: str) -> list:
        raw = doc.get(key, [])
        if not isinstance(raw, list):
            raise PackFormatError(f"pack.{key}", "expected a list")
        return raw

    try:
        indices = tuple(
            index_definition_from_doc(entry, f"indices[{i}]")
            for i, entry in enumerate(section("indices"))
        )
    except ValueError as exc:
        raise PackFormatError("indices", str(exc)) from None
    models = tuple(
        model_entry_from_doc(entry, f"models[{i}]") for i, entry in enumerate(section("models"))
    )
    indicators = tuple(
        indicator_entry_from_doc(entry, f"indicators[{i}]")
        for i, entry in enumerate(section("indicators"))
    )
    values = tuple(
        value_from_doc(entry, f"values[{i}]") for i, entry in enumerate(section("values"))
    )
    return Pack(name, version, indices, models, indicators, values)


def pack_to_document(pack: Pack) -> dict:
    doc: dict[str, Any] = {
        "name": pack.name,
        "version": pack.version,
        "indices": [
            {"id": d.id, "label": d.label, "unit": d.unit, "description": d.description}
            for d in pack.indices
        ],
        "models": [
            {"id": m.id, "label": m.label, "expression": m.expression, "unit": m.unit}
            for m in pack.models
        ],
        "indicators": [
            {
                "id": ind.id,
                "label": ind.label,
                "expression": ind.expression,
                "unit": ind.unit,
                "default_mode": ind.default_mode,
                "rules": [
                    {"op": r.op, "threshold": r.threshold, "label": r.label,
                     "severity": r.severity}
                    for r in ind.rules
                ],
            }
            for ind in pack.indicators
        ],
    }
    if pack.values:
        doc["values"] = [
            {"index_id": v.index_id, "period": v.period.label, "value": v.value}
            for v in pack.values
        ]
    return doc


def save_pack(pack: Pack, path: str | Path) -> None:
    Path(path).write_text(json.dumps(pack_to_document(pack), indent=2, ensure_ascii=False) + "\n",
                          encoding="utf-8")


def load_pack(path: str | Path) -> Pack:
    """Load a pack document from disk.

    Raises :class:`PackFormatError` on structural problems (JSON syntax
    errors carry the line/column from the decoder).
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PackFormatError(str(path), f"invalid JSON: {exc}") from None
    return pack_from_document(doc)


# ---------------------------------------------------------------------------
# Install ordering


def model_install_order(
    entries: tuple[ModelEntry, ...] | list[ModelEntry], known_ids: set[str]
) -> tuple[list[tuple[ModelEntry, Any]], list[tuple[ModelEntry, Exception]]]:
    """Order pack models so intra-pack dependencies register first.

    Returns ``(ordered, doomed)``: ``ordered`` pairs each registrable entry
    with its parsed expression, topologically sorted over the pack's own
    dependency edges (so the final catalog does not depend on file order);
    ``doomed`` pairs entries with errors decided here -- expression parse
    failures, duplicate ids within the pack, and intra-pack dependency
    cycles.  Entries whose dependencies are merely unknown stay in
    ``ordered`` so the catalog reports them itself.
    """
    parsed: dict[str, Any] = {}
    doomed: list[tuple[ModelEntry, Exception]] = []
    by_id: dict[str, ModelEntry] = {}
    order: list[str] = []
    for entry in entries:
        if entry.id in by_id:
            doomed.append((entry, DuplicateIdError(entry.id)))
            continue
        try:
            parsed[entry.id] = parse(entry.expression)
        except ExpressionError as exc:
            doomed.append((entry, exc))
            continue
        by_id[entry.id] = entry
        order.append(entry.id)

    # Edges restricted to models defined in this pack.
    edges = {name: (free_variables(parsed[name]) & by_id.keys()) - {name} for name in order}
    self_loops = {
        name for name in order if name in free_variables(parsed[name]) and name not in known_ids
    }

    cyclic = _find_cycles(edges, self_loops)
    for name, cycle in cyclic.items():
        doomed.append((by_id[name], CycleDetectedError(cycle)))

    remaining = [name for name in order if name not in cyclic]
    live = set(remaining)
    blocked = {name: sum(dep in live for dep in edges[name]) for name in remaining}
    dependents: dict[str, list[str]] = {name: [] for name in remaining}
    for name in remaining:
        for dep in edges[name]:
            if dep in dependents:
                dependents[dep].append(name)

    ordered: list[tuple[ModelEntry, Any]] = []
    queue = [name for name in remaining if blocked[name] == 0]
    emitted: set[str] = set()
    while queue:
        name = queue.pop(0)
        emitted.add(name)
        ordered.append((by_id[name], parsed[name]))
        for dependent in dependents.get(name, ()):
            blocked[dependent] -= 1
            if blocked[dependent] == 0:
                queue.append(dependent)
    # Entries blocked behind doomed dependencies: emit in file order and let
    # registration fail with the honest unknown-dependency error.
    for name in remaining:
        if name not in emitted:
            ordered.append((by_id[name], parsed[name]))
    return ordered, doomed


def _find_cycles(
    edges: dict[str, frozenset[str]], self_loops: set[str]
) -> dict[str, tuple[str, ...]]:
    """Map every node on an intra-pack dependency cycle to one cycle path."""
    cycles: dict[str, tuple[str, ...]] = {}
    for name in self_loops:
        cycles[name] = (name, name)

    # Tarjan strongly-connected components; SCCs larger than one node are cycles.
    index_of: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = [0]

    def strongconnect(node: str) -> None:
        index_of[node] = low[node] = counter[0]
        counter[0] += 1
        stack.append(node)
        on_stack.add(node)
        for dep in sorted(edges.get(node, ())):
            if dep not in index_of:
                strongconnect(dep)
                low[node] = min(low[node], low[dep])
            elif dep in on_stack:
                low[node] = min(low[node], index_of[dep])
        if low[node] == index_of[node]:
            component = []
            while True:
                member = stack.pop()
                on_stack.discard(member)
                component.append(member)
                if member == node:
                    break
            if len(component) > 1:
                path = tuple(sorted(component))
                for member in component:
                    cycles.setdefault(member, path + (path[0],))

    for name in sorted(edges):
        if name not in index_of:
            strongconnect(name)
    return cycles
