"""Three-tier service catalog.

The catalog holds the three service granularities and the stored input data:

* **indices** -- leaf inputs keyed by period (e.g. ``EV``, ``Ra``);
* **models** -- named formulas over indices and other models (e.g. ``CPI``);
* **indicators** -- decision outputs with interpretation rules and a default
  visualization mode (e.g. ``CV``, ``ET_monthly``).

Ids share one global namespace.  The dependency graph is kept a DAG with
indices as leaves; models may reference models, indicators may reference
indices and models but never other indicators.

A :class:`Catalog` is a value: every operation returns a new catalog and
leaves the old one untouched, so a failed operation trivially leaves state
byte-identical and readers can keep using a snapshot while a single writer
applies updates.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .expr import Expression, free_variables

__all__ = [
    "SEVERITIES",
    "MODES",
    "RULE_OPS",
    "TIERS",
    "PeriodKey",
    "PeriodFormatError",
    "InterpretationRule",
    "IndexDefinition",
    "ModelDefinition",
    "IndicatorDefinition",
    "IndexValue",
    "ServiceEntry",
    "Catalog",
    "RegistryError",
    "DuplicateIdError",
    "UnknownDependencyError",
    "CycleDetectedError",
    "UnknownIdError",
    "UnknownIndexError",
    "NonFiniteValueError",
    "parse_values_csv",
    "VALUES_CSV_HEADER",
]

SEVERITIES = ("good", "warning", "bad")
MODES = ("gauge", "text", "histogram")
RULE_OPS = ("lt", "le", "gt", "ge", "eq")
TIERS = ("index", "model", "indicator")

_ID_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


# ---------------------------------------------------------------------------
# Periods

_PERIOD_PATTERNS = {
    "day": re.compile(r"\d{4}-(0[1-9]|1[0-2])-(0[1-9]|[12]\d|3[01])\Z"),
    "decade": re.compile(r"\d{4}-(0[1-9]|1[0-2])-D[123]\Z"),
    "month": re.compile(r"\d{4}-(0[1-9]|1[0-2])\Z"),
}


class PeriodFormatError(ValueError):
    pass


@dataclass(frozen=True)
class PeriodKey:
    """One reporting period: a day (``2024-03-17``), a ten-day decade
    (``2024-03-D2``) or a month (``2024-03``)."""

    kind: str
    label: str

    def __post_init__(self) -> None:
        pattern = _PERIOD_PATTERNS.get(self.kind)
        if pattern is None:
            raise PeriodFormatError(f"unknown period kind {self.kind!r}")
        if not pattern.match(self.label):
            raise PeriodFormatError(f"label {self.label!r} does not match kind {self.kind!r}")

    @classmethod
    def from_label(cls, label: str) -> "PeriodKey":
        for kind, pattern in _PERIOD_PATTERNS.items():
            if pattern.match(label):
                return cls(kind, label)
        raise PeriodFormatError(
            f"{label!r} is not a period (expected YYYY-MM, YYYY-MM-DD or YYYY-MM-D1|D2|D3)"
        )


# ---------------------------------------------------------------------------
# Definitions


@dataclass(frozen=True)
class InterpretationRule:
    """One decision-reading rule: ``value <op> threshold`` -> label/severity.

    Rules are ordered; the first match wins.
    """

    op: str
    threshold: float
    label: str
    severity: str

    def __post_init__(self) -> None:
        if self.op not in RULE_OPS:
            raise ValueError(f"unknown rule op {self.op!r}")
        if self.severity not in SEVERITIES:
            raise ValueError(f"unknown severity {self.severity!r}")
        object.__setattr__(self, "threshold", float(self.threshold))


def _check_id(identifier: str) -> None:
    if not _ID_RE.match(identifier or ""):
        raise ValueError(f"invalid id {identifier!r}")


@dataclass(frozen=True)
class IndexDefinition:
    id: str
    label: str
    unit: str
    description: str = ""

    def __post_init__(self) -> None:
        _check_id(self.id)
        if not self.unit:
            raise ValueError(f"index {self.id!r} needs a nonempty unit")


@dataclass(frozen=True)
class ModelDefinition:
    id: str
    label: str
    expression: Expression
    unit: str

    def __post_init__(self) -> None:
        _check_id(self.id)


@dataclass(frozen=True)
class IndicatorDefinition:
    id: str
    label: str
    expression: Expression
    unit: str
    default_mode: str = "text"
    rules: tuple[InterpretationRule, ...] = ()

    def __post_init__(self) -> None:
        _check_id(self.id)
        if self.default_mode not in MODES:
            raise ValueError(f"unknown visualization mode {self.default_mode!r}")


@dataclass(frozen=True)
class IndexValue:
    index_id: str
    period: PeriodKey
    value: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", float(self.value))


@dataclass(frozen=True)
class ServiceEntry:
    tier: str
    id: str
    label: str
    unit: str


# ---------------------------------------------------------------------------
# Errors


class RegistryError(Exception):
    """Base class for catalog registration/update failures."""


class DuplicateIdError(RegistryError):
    def __init__(self, identifier: str):
        super().__init__(f"id '{identifier}' is already registered")
        self.id = identifier


class UnknownDependencyError(RegistryError):
    def __init__(self, missing: Iterable[str]):
        self.missing = tuple(sorted(missing))
        super().__init__("unknown dependencies: " + ", ".join(self.missing))


class CycleDetectedError(RegistryError):
    def __init__(self, path: Iterable[str]):
        self.path = tuple(path)
        super().__init__("dependency cycle: " + " -> ".join(self.path))


class UnknownIdError(RegistryError):
    def __init__(self, identifier: str):
        super().__init__(f"no service registered with id '{identifier}'")
        self.id = identifier


class UnknownIndexError(RegistryError):
    def __init__(self, identifier: str):
        super().__init__(f"no index registered with id '{identifier}'")
        self.id = identifier


class NonFiniteValueError(RegistryError):
    def __init__(self, what: str):
        super().__init__(f"{what} must be finite")
        self.what = what


# ---------------------------------------------------------------------------
# Catalog


@dataclass(frozen=True)
class Catalog:
    indices: dict[str, IndexDefinition] = field(default_factory=dict)
    models: dict[str, ModelDefinition] = field(default_factory=dict)
    indicators: dict[str, IndicatorDefinition] = field(default_factory=dict)
    values: dict[tuple[str, PeriodKey], float] = field(default_factory=dict)

    @classmethod
    def empty(cls) -> "Catalog":
        return cls()

    # -- lookups ------------------------------------------------------------

    def tier_of(self, identifier: str) -> str | None:
        if identifier in self.indices:
            return "index"
        if identifier in self.models:
            return "model"
        if identifier in self.indicators:
            return "indicator"
        return None

    def value_for(self, index_id: str, period: PeriodKey) -> float | None:
        return self.values.get((index_id, period))

    def periods(self) -> list[PeriodKey]:
        """Distinct periods with at least one stored value, sorted."""
        seen = {period for (_, period) in self.values}
        return sorted(seen, key=lambda p: (p.kind, p.label))

    def list_services(self, tier: str = "all") -> list[ServiceEntry]:
        """Deterministic listing (sorted by id) of one tier or all three."""
        if tier not in TIERS + ("all",):
            raise ValueError(f"unknown tier {tier!r}")
        entries: list[ServiceEntry] = []
        if tier in ("index", "all"):
            entries += [ServiceEntry("index", d.id, d.label, d.unit) for d in self.indices.values()]
        if tier in ("model", "all"):
            entries += [ServiceEntry("model", d.id, d.label, d.unit) for d in self.models.values()]
        if tier in ("indicator", "all"):
            entries += [
                ServiceEntry("indicator", d.id, d.label, d.unit) for d in self.indicators.values()
            ]
        return sorted(entries, key=lambda e: e.id)

    # -- registration -------------------------------------------------------

    def register_index(self, definition: IndexDefinition) -> "Catalog":
        if self.tier_of(definition.id) is not None:
            raise DuplicateIdError(definition.id)
        return replace(self, indices={**self.indices, definition.id: definition})

    def register_model(self, definition: ModelDefinition) -> "Catalog":
        if self.tier_of(definition.id) is not None:
            raise DuplicateIdError(definition.id)
        self._check_dependencies(definition.expression)
        updated = replace(self, models={**self.models, definition.id: definition})
        updated._check_acyclic()
        return updated

    def register_indicator(self, definition: IndicatorDefinition) -> "Catalog":
        if self.tier_of(definition.id) is not None:
            raise DuplicateIdError(definition.id)
        for rule in definition.rules:
            if not math.isfinite(rule.threshold):
                raise NonFiniteValueError(f"rule threshold for '{definition.id}'")
        self._check_dependencies(definition.expression)
        updated = replace(self, indicators={**self.indicators, definition.id: definition})
        updated._check_acyclic()
        return updated

    def set_index_value(self, value: IndexValue) -> "Catalog":
        """Upsert one value; the latest write for (index, period) wins."""
        if value.index_id not in self.indices:
            raise UnknownIndexError(value.index_id)
        if not math.isfinite(value.value):
            raise NonFiniteValueError(f"value for '{value.index_id}'")
        key = (value.index_id, value.period)
        return replace(self, values={**self.values, key: float(value.value)})

    def replace_definition(
        self, identifier: str, definition: IndexDefinition | ModelDefinition | IndicatorDefinition
    ) -> "Catalog":
        """Swap a definition in place, keeping the same id and tier.

        The replacement is applied only if the whole catalog still validates
        (no unknown dependencies, no cycles); otherwise the error is raised
        and the catalog is unchanged.
        """
        if definition.id != identifier:
            raise ValueError(
                f"replacement id {definition.id!r} does not match target {identifier!r}"
            )
        if isinstance(definition, IndexDefinition):
            if identifier not in self.indices:
                raise UnknownIdError(identifier)
            return replace(self, indices={**self.indices, identifier: definition})
        if isinstance(definition, ModelDefinition):
            if identifier not in self.models:
                raise UnknownIdError(identifier)
            self._check_dependencies(definition.expression)
            updated = replace(self, models={**self.models, identifier: definition})
        elif isinstance(definition, IndicatorDefinition):
            if identifier not in self.indicators:
                raise UnknownIdError(identifier)
            for rule in definition.rules:
                if not math.isfinite(rule.threshold):
                    raise NonFiniteValueError(f"rule threshold for '{identifier}'")
            self._check_dependencies(definition.expression)
            updated = replace(self, indicators={**self.indicators, identifier: definition})
        else:
            raise TypeError(f"not a definition: {definition!r}")
        updated._check_acyclic()
        return updated

    # -- validation ---------------------------------------------------------

    def _check_dependencies(self, expression: Expression) -> None:
        # Models and indicators may depend on indices and models only;
        # indicator ids are never valid dependencies (indicators are terminal).
        known = self.indices.keys() | self.models.keys()
        missing = free_variables(expression) - known
        if missing:
            raise UnknownDependencyError(missing)

    def _dependency_edges(self) -> dict[str, frozenset[str]]:
        edges: dict[str, frozenset[str]] = {}
        for model in self.models.values():
            edges[model.id] = free_variables(model.expression) & self.models.keys()
        for indicator in self.indicators.values():
            edges[indicator.id] = free_variables(indicator.expression) & self.models.keys()
        return edges

    def _check_acyclic(self) -> None:
        edges = self._dependency_edges()
        state: dict[str, int] = {}  # 1 = on stack, 2 = done
        trail: list[str] = []

        def visit(node: str) -> None:
            state[node] = 1
            trail.append(node)
            for dep in sorted(edges.get(node, ())):
                mark = state.get(dep)
                if mark == 1:
                    cycle = trail[trail.index(dep):] + [dep]
                    raise CycleDetectedError(cycle)
                if mark is None:
                    visit(dep)
            trail.pop()
            state[node] = 2

        for start in sorted(edges):
            if start not in state:
                visit(start)


# ---------------------------------------------------------------------------
# CSV ingestion

VALUES_CSV_HEADER = ("index_id", "period", "value")


def parse_values_csv(text: str) -> list[IndexValue]:
    """Parse index values from CSV with header ``index_id,period,value``.

    Raises ``ValueError`` naming the first offending row.  Validation against
    the catalog (registered ids, finiteness) happens at registration time.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty CSV: expected header 'index_id,period,value'") from None
    if tuple(cell.strip() for cell in header) != VALUES_CSV_HEADER:
        raise ValueError(f"bad CSV header {header!r}: expected 'index_id,period,value'")
    out: list[IndexValue] = []
    for row_number, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 3:
            raise ValueError(f"row {row_number}: expected 3 columns, got {len(row)}")
        index_id, period_label, value_text = (cell.strip() for cell in row)
        try:
            period = PeriodKey.from_label(period_label)
        except PeriodFormatError as exc:
            raise ValueError(f"row {row_number}: {exc}") from None
        try:
            value = float(value_text)
        except ValueError:
            raise ValueError(f"row {row_number}: bad number {value_text!r}") from None
        out.append(IndexValue(index_id, period, value))
    return out
