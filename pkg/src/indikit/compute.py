"""Indicator evaluation over a catalog snapshot.

Computing an indicator means resolving its transitive dependency closure,
reading index values for the requested period, evaluating models in
topological order and finally the indicator itself.  Everything here is a
pure function over an immutable catalog snapshot, so any number of
computations may run concurrently.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from . import viz
from .expr import ExpressionError, evaluate, free_variables
from .registry import Catalog, PeriodKey

__all__ = [
    "EvaluationPlan",
    "IndicatorReport",
    "ReportOutcome",
    "ComputeError",
    "UnknownIndicatorError",
    "MissingIndexValueError",
    "EvaluationError",
    "plan",
    "compute_indicator",
    "compute_report",
]


class ComputeError(Exception):
    """Base class for indicator computation failures."""


class UnknownIndicatorError(ComputeError):
    def __init__(self, indicator_id: str):
        super().__init__(f"no indicator registered with id '{indicator_id}'")
        self.indicator_id = indicator_id


class MissingIndexValueError(ComputeError):
    def __init__(self, index_id: str, period: PeriodKey):
        super().__init__(f"missing value: {index_id}@{period.label}")
        self.index_id = index_id
        self.period = period


class EvaluationError(ComputeError):
    def __init__(self, node_id: str, cause: ExpressionError):
        super().__init__(f"evaluation of '{node_id}' failed: {cause}")
        self.node_id = node_id
        self.cause = cause


@dataclass(frozen=True)
class EvaluationPlan:
    """Execution order for one indicator: its index closure (sorted by id),
    then its model closure in topological order (ties by ascending id),
    then the indicator itself."""

    target: str
    nodes: tuple[str, ...]


@dataclass(frozen=True)
class IndicatorReport:
    indicator_id: str
    period: PeriodKey
    value: float
    unit: str
    interpretation: tuple[str, str] | None
    descriptor: viz.VisualizationDescriptor
    intermediates: dict[str, float]


@dataclass(frozen=True)
class ReportOutcome:
    """Per-indicator result of a batch compute: a report or an error."""

    indicator_id: str
    report: IndicatorReport | None = None
    error: Exception | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def plan(catalog: Catalog, indicator_id: str) -> EvaluationPlan:
    """Build the deterministic evaluation order for one indicator.

    The node list is exactly the transitive closure of the target; every
    node's dependencies appear before it.
    """
    target = catalog.indicators.get(indicator_id)
    if target is None:
        raise UnknownIndicatorError(indicator_id)

    indices: set[str] = set()
    models: set[str] = set()
    pending = list(free_variables(target.expression))
    while pending:
        name = pending.pop()
        if name in catalog.indices:
            indices.add(name)
        elif name not in models:
            models.add(name)
            pending.extend(free_variables(catalog.models[name].expression))

    model_deps = {
        name: free_variables(catalog.models[name].expression) & models for name in models
    }
    blocking = {name: len(deps) for name, deps in model_deps.items()}
    dependents: dict[str, list[str]] = {name: [] for name in models}
    for name, deps in model_deps.items():
        for dep in deps:
            dependents[dep].append(name)

    ready = [name for name, count in blocking.items() if count == 0]
    heapq.heapify(ready)
    ordered: list[str] = []
    while ready:
        name = heapq.heappop(ready)
        ordered.append(name)
        for dependent in dependents[name]:
            blocking[dependent] -= 1
            if blocking[dependent] == 0:
                heapq.heappush(ready, dependent)

    return EvaluationPlan(indicator_id, tuple(sorted(indices)) + tuple(ordered) + (indicator_id,))


def _run_plan(
    catalog: Catalog, execution: EvaluationPlan, period: PeriodKey, memo: dict[str, float]
) -> dict[str, float]:
    """Evaluate every plan node, reusing ``memo`` for nodes already computed
    in this call batch.  Returns node -> value in plan order."""
    produced: dict[str, float] = {}
    env: dict[str, float] = {}
    for node in execution.nodes[:-1]:
        if node in memo:
            env[node] = produced[node] = memo[node]
            continue
        if node in catalog.indices:
            stored = catalog.value_for(node, period)
            if stored is None:
                raise MissingIndexValueError(node, period)
            value = stored
        else:
            try:
                value = evaluate(catalog.models[node].expression, env)
            except ExpressionError as exc:
                raise EvaluationError(node, exc) from exc
        memo[node] = env[node] = produced[node] = value
    target = execution.target
    try:
        produced[target] = evaluate(catalog.indicators[target].expression, env)
    except ExpressionError as exc:
        raise EvaluationError(target, exc) from exc
    return produced


def _build_report(
    catalog: Catalog,
    indicator_id: str,
    period: PeriodKey,
    mode: str | None,
    memo: dict[str, float],
) -> IndicatorReport:
    execution = plan(catalog, indicator_id)
    produced = _run_plan(catalog, execution, period, memo)
    definition = catalog.indicators[indicator_id]
    value = produced[indicator_id]
    interpretation = viz.interpret(definition.rules, value)
    chosen_mode = mode or definition.default_mode
    descriptor = viz.make_descriptor(
        indicator_id,
        chosen_mode,
        value=value,
        unit=definition.unit,
        rules=definition.rules,
        interpretation=interpretation,
        series=[(period.label, value)] if chosen_mode == "histogram" else None,
    )
    return IndicatorReport(
        indicator_id, period, value, definition.unit, interpretation, descriptor, produced
    )


def compute_indicator(
    catalog: Catalog, indicator_id: str, period: PeriodKey, mode: str | None = None
) -> IndicatorReport:
    """Compute one indicator for one period.

    Raises :class:`UnknownIndicatorError`, :class:`MissingIndexValueError`
    (the first index in plan order with no stored value for the period) or
    :class:`EvaluationError` wrapping the formula failure.
    """
    return _build_report(catalog, indicator_id, period, mode, {})


def compute_report(
    catalog: Catalog,
    indicator_ids: list[str] | tuple[str, ...],
    period: PeriodKey,
    mode: str | None = None,
) -> list[ReportOutcome]:
    """Compute a batch of indicators for one period.

    One outcome per requested id, in request order.  Shared dependencies are
    evaluated once per call; a failing indicator never aborts its siblings.
    """
    memo: dict[str, float] = {}
    outcomes: list[ReportOutcome] = []
    for indicator_id in indicator_ids:
        try:
            report = _build_report(catalog, indicator_id, period, mode, memo)
        except ComputeError as exc:
            outcomes.append(ReportOutcome(indicator_id, error=exc))
        else:
            outcomes.append(ReportOutcome(indicator_id, report=report))
    return outcomes
