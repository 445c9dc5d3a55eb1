"""Three-role agent runtime.

The runtime hosts exactly one agent per role, each draining its own mailbox
strictly serially on a dedicated thread:

* the **Editor** owns the catalog: it validates and applies every
  registration, value write, replacement and pack install;
* the **Arguer** computes indicator reports from catalog snapshots and never
  mutates anything;
* the **Supervisor** keeps the append-only anomaly log.

All communication is by immutable messages.  Every request gets exactly one
reply -- an ``Ack``/response on success or an ``ErrorReply`` carrying the
domain error -- and every failure is also recorded with the Supervisor
before the reply goes out, so an error observed by a caller is always
already visible in the anomaly log.  Message ids come from one global
monotonic counter (hence strictly increasing per sender as well).
"""

from __future__ import annotations

import itertools
import queue
import threading
from concurrent.futures import Future
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import Union

from . import compute, packs
from .compute import ReportOutcome, compute_report
from .expr import ExpressionError
from .registry import (
    Catalog,
    IndexDefinition,
    IndexValue,
    IndicatorDefinition,
    ModelDefinition,
    PeriodKey,
    RegistryError,
)

__all__ = [
    "AgentRole",
    "CATEGORIES",
    "AgentMessage",
    "AnomalyRecord",
    "ProtocolError",
    "RegisterIndex",
    "RegisterModel",
    "RegisterIndicator",
    "SetIndexValue",
    "ReplaceDefinition",
    "InstallPack",
    "ComputeRequest",
    "ComputeResponse",
    "InstallOutcome",
    "InstallResponse",
    "Anomaly",
    "Ack",
    "ErrorReply",
    "SupervisorLog",
    "AgentRuntime",
    "collect_series",
]


class AgentRole(Enum):
    SUPERVISOR = "supervisor"
    EDITOR = "editor"
    ARGUER = "arguer"


#: Anomaly categories: definition/data validation, indicator evaluation,
#: malformed message traffic.
CATEGORIES = ("validation", "evaluation", "protocol")


class ProtocolError(Exception):
    def __init__(self, role: AgentRole, payload: object):
        super().__init__(
            f"agent '{role.value}' cannot handle payload {type(payload).__name__}"
        )
        self.role = role


# ---------------------------------------------------------------------------
# Payloads


@dataclass(frozen=True)
class RegisterIndex:
    definition: IndexDefinition


@dataclass(frozen=True)
class RegisterModel:
    entry: packs.ModelEntry


@dataclass(frozen=True)
class RegisterIndicator:
    entry: packs.IndicatorEntry


@dataclass(frozen=True)
class SetIndexValue:
    value: IndexValue


@dataclass(frozen=True)
class ReplaceDefinition:
    target_id: str
    entry: Union[IndexDefinition, packs.ModelEntry, packs.IndicatorEntry]


@dataclass(frozen=True)
class InstallPack:
    pack: packs.Pack


@dataclass(frozen=True)
class ComputeRequest:
    indicator_ids: tuple[str, ...]
    period: PeriodKey
    mode: str | None = None


@dataclass(frozen=True)
class ComputeResponse:
    outcomes: tuple[ReportOutcome, ...]


@dataclass(frozen=True)
class InstallOutcome:
    tier: str  # index | model | indicator | value
    id: str
    error: Exception | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class InstallResponse:
    outcomes: tuple[InstallOutcome, ...]


@dataclass(frozen=True)
class Anomaly:
    source: AgentRole
    original_msg_id: int
    category: str
    detail: str


@dataclass(frozen=True)
class Ack:
    original_msg_id: int


@dataclass(frozen=True)
class ErrorReply:
    original_msg_id: int
    error: Exception


Payload = Union[
    RegisterIndex,
    RegisterModel,
    RegisterIndicator,
    SetIndexValue,
    ReplaceDefinition,
    InstallPack,
    ComputeRequest,
    ComputeResponse,
    InstallResponse,
    Anomaly,
    Ack,
    ErrorReply,
]


@dataclass(frozen=True)
class AgentMessage:
    msg_id: int
    sender: str  # role value or an external client name
    recipient: AgentRole | str  # requests go to a role; replies to the requester
    payload: Payload


@dataclass(frozen=True)
class AnomalyRecord:
    seq: int
    source: AgentRole
    original_msg_id: int
    category: str
    detail: str
    timestamp: str


# ---------------------------------------------------------------------------
# Supervisor log


class SupervisorLog:
    """Append-only anomaly log with a dense, gapless sequence starting at 1."""

    def __init__(self) -> None:
        self._records: list[AnomalyRecord] = []
        self._lock = threading.Lock()

    def append(self, source: AgentRole, original_msg_id: int, category: str, detail: str
               ) -> AnomalyRecord:
        if category not in CATEGORIES:
            raise ValueError(f"unknown anomaly category {category!r}")
        with self._lock:
            record = AnomalyRecord(
                seq=len(self._records) + 1,
                source=source,
                original_msg_id=original_msg_id,
                category=category,
                detail=detail,
                timestamp=datetime.now(timezone.utc).isoformat(),
            )
            self._records.append(record)
            return record

    def records(self, category: str | None = None) -> list[AnomalyRecord]:
        with self._lock:
            snapshot = list(self._records)
        if category is None:
            return snapshot
        if category not in CATEGORIES:
            raise ValueError(f"unknown anomaly category {category!r}")
        return [record for record in snapshot if record.category == category]


# ---------------------------------------------------------------------------
# Runtime

_STOP = object()
_EDITOR_PAYLOADS = (
    RegisterIndex, RegisterModel, RegisterIndicator, SetIndexValue, ReplaceDefinition,
    InstallPack,
)


def route_for(payload: Payload) -> AgentRole:
    """The role responsible for a request payload."""
    if isinstance(payload, _EDITOR_PAYLOADS):
        return AgentRole.EDITOR
    if isinstance(payload, ComputeRequest):
        return AgentRole.ARGUER
    if isinstance(payload, Anomaly):
        return AgentRole.SUPERVISOR
    raise ValueError(f"{type(payload).__name__} is a reply payload, not a request")


class AgentRuntime:
    """One Supervisor + one Editor + one Arguer over a shared catalog value.

    Use as a context manager or call :meth:`start`/:meth:`stop`.  External
    callers interact through :meth:`request` (build-and-dispatch) or
    :meth:`dispatch`/:meth:`dispatch_async` with a prebuilt message.
    """

    def __init__(self, catalog: Catalog | None = None):
        self._catalog = catalog if catalog is not None else Catalog.empty()
        self.log = SupervisorLog()
        self._counter = itertools.count(1)
        self._counter_lock = threading.Lock()
        self._mailboxes: dict[AgentRole, queue.Queue] = {role: queue.Queue() for role in AgentRole}
        self._threads: list[threading.Thread] = []
        self._started = False

    # -- lifecycle ----------------------------------------------------------

    def start(self) -> "AgentRuntime":
        if self._started:
            return self
        handlers = {
            AgentRole.EDITOR: self._editor_handle,
            AgentRole.ARGUER: self._arguer_handle,
            AgentRole.SUPERVISOR: self._supervisor_handle,
        }
        for role in AgentRole:
            worker = threading.Thread(
                target=self._drain, args=(role, handlers[role]),
                name=f"agent-{role.value}", daemon=True,
            )
            worker.start()
            self._threads.append(worker)
        self._started = True
        return self

    def stop(self) -> None:
        if not self._started:
            return
        for role in AgentRole:
            self._mailboxes[role].put(_STOP)
        for worker in self._threads:
            worker.join(timeout=5)
        self._threads.clear()
        self._started = False

    def __enter__(self) -> "AgentRuntime":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.stop()

    # -- public API ---------------------------------------------------------

    @property
    def catalog(self) -> Catalog:
        """Current catalog snapshot (immutable; safe to read concurrently)."""
        return self._catalog

    def next_msg_id(self) -> int:
        with self._counter_lock:
            return next(self._counter)

    def message(self, payload: Payload, sender: str = "client",
                recipient: AgentRole | None = None) -> AgentMessage:
        return AgentMessage(
            msg_id=self.next_msg_id(),
            sender=sender,
            recipient=recipient if recipient is not None else route_for(payload),
            payload=payload,
        )

    def dispatch_async(self, msg: AgentMessage) -> "Future[AgentMessage]":
        if not self._started:
            raise RuntimeError("runtime is not started")
        if not isinstance(msg.recipient, AgentRole):
            raise ValueError(f"no agent with role {msg.recipient!r}")
        reply: Future[AgentMessage] = Future()
        self._mailboxes[msg.recipient].put((msg, reply))
        return reply

    def dispatch(self, msg: AgentMessage, timeout: float = 30.0) -> AgentMessage:
        """Deliver one message and wait for its single reply."""
        return self.dispatch_async(msg).result(timeout=timeout)

    def request(self, payload: Payload, sender: str = "client",
                timeout: float = 30.0) -> AgentMessage:
        """Build a message for ``payload``, route it, and wait for the reply."""
        return self.dispatch(self.message(payload, sender=sender), timeout=timeout)

    def install_pack(self, pack: packs.Pack, sender: str = "client"
                     ) -> tuple[InstallOutcome, ...]:
        """Install a pack through the Editor; per-entry outcomes in pack order."""
        reply = self.request(InstallPack(pack), sender=sender)
        assert isinstance(reply.payload, InstallResponse)
        return reply.payload.outcomes

    def anomalies(self, category: str | None = None) -> list[AnomalyRecord]:
        return self.log.records(category)

    # -- internals ----------------------------------------------------------

    def _drain(self, role: AgentRole, handler) -> None:
        mailbox = self._mailboxes[role]
        while True:
            item = mailbox.get()
            if item is _STOP:
                return
            msg, reply = item
            try:
                result = handler(msg)
            except Exception as exc:  # agent must never die silently
                result = self._fail(role, msg, "protocol", exc)
            reply.set_result(result)

    def _reply(self, role: AgentRole, msg: AgentMessage, payload: Payload) -> AgentMessage:
        return AgentMessage(self.next_msg_id(), role.value, msg.sender, payload)

    def _notify(self, source: AgentRole, original_msg_id: int, category: str,
                detail: str) -> None:
        """Record an anomaly with the Supervisor and wait until it is logged."""
        if source is AgentRole.SUPERVISOR:
            self.log.append(source, original_msg_id, category, detail)
            return
        notice = self.message(
            Anomaly(source, original_msg_id, category, detail),
            sender=source.value,
            recipient=AgentRole.SUPERVISOR,
        )
        self.dispatch(notice)

    def _fail(self, role: AgentRole, msg: AgentMessage, category: str,
              error: Exception) -> AgentMessage:
        self._notify(role, msg.msg_id, category, str(error))
        return self._reply(role, msg, ErrorReply(msg.msg_id, error))

    # -- editor ---------------------------------------------------------------

    def _editor_handle(self, msg: AgentMessage) -> AgentMessage:
        payload = msg.payload
        if isinstance(payload, InstallPack):
            return self._editor_install(msg, payload.pack)
        try:
            if isinstance(payload, RegisterIndex):
                updated = self._catalog.register_index(payload.definition)
            elif isinstance(payload, RegisterModel):
                updated = self._catalog.register_model(_model_definition(payload.entry))
            elif isinstance(payload, RegisterIndicator):
                updated = self._catalog.register_indicator(_indicator_definition(payload.entry))
            elif isinstance(payload, SetIndexValue):
                updated = self._catalog.set_index_value(payload.value)
            elif isinstance(payload, ReplaceDefinition):
                updated = self._catalog.replace_definition(
                    payload.target_id, _definition(payload.entry)
                )
            else:
                return self._fail(
                    AgentRole.EDITOR, msg, "protocol", ProtocolError(AgentRole.EDITOR, payload)
                )
        except (RegistryError, ExpressionError, ValueError) as exc:
            return self._fail(AgentRole.EDITOR, msg, "validation", exc)
        self._catalog = updated
        return self._reply(AgentRole.EDITOR, msg, Ack(msg.msg_id))

    def _editor_install(self, msg: AgentMessage, pack: packs.Pack) -> AgentMessage:
        def attempt(tier: str, entry_id: str, apply) -> InstallOutcome:
            try:
                self._catalog = apply()
            except (RegistryError, ExpressionError, ValueError) as exc:
                self._notify(AgentRole.EDITOR, msg.msg_id, "validation", str(exc))
                return InstallOutcome(tier, entry_id, exc)
            return InstallOutcome(tier, entry_id)

        outcomes: list[InstallOutcome] = []
        for index_def in pack.indices:
            outcomes.append(attempt(
                "index", index_def.id,
                lambda d=index_def: self._catalog.register_index(d),
            ))

        known = set(self._catalog.indices) | set(self._catalog.models)
        ordered, doomed = packs.model_install_order(pack.models, known)
        model_results: dict[int, InstallOutcome] = {}
        for entry, expression in ordered:
            definition = ModelDefinition(entry.id, entry.label, expression, entry.unit)
            model_results[id(entry)] = attempt(
                "model", entry.id,
                lambda d=definition: self._catalog.register_model(d),
            )
        for entry, error in doomed:
            self._notify(AgentRole.EDITOR, msg.msg_id, "validation", str(error))
            model_results[id(entry)] = InstallOutcome("model", entry.id, error)
        outcomes.extend(model_results[id(entry)] for entry in pack.models)

        for indicator in pack.indicators:
            outcomes.append(attempt(
                "indicator", indicator.id,
                lambda e=indicator: self._catalog.register_indicator(_indicator_definition(e)),
            ))
        for value in pack.values:
            outcomes.append(attempt(
                "value", f"{value.index_id}@{value.period.label}",
                lambda v=value: self._catalog.set_index_value(v),
            ))
        return self._reply(AgentRole.EDITOR, msg, InstallResponse(tuple(outcomes)))

    # -- arguer ---------------------------------------------------------------

    def _arguer_handle(self, msg: AgentMessage) -> AgentMessage:
        payload = msg.payload
        if not isinstance(payload, ComputeRequest):
            return self._fail(
                AgentRole.ARGUER, msg, "protocol", ProtocolError(AgentRole.ARGUER, payload)
            )
        snapshot = self._catalog
        outcomes = compute_report(snapshot, payload.indicator_ids, payload.period, payload.mode)
        for outcome in outcomes:
            if outcome.error is not None:
                category = (
                    "validation"
                    if isinstance(outcome.error, compute.UnknownIndicatorError)
                    else "evaluation"
                )
                self._notify(AgentRole.ARGUER, msg.msg_id, category, str(outcome.error))
        return self._reply(AgentRole.ARGUER, msg, ComputeResponse(tuple(outcomes)))

    # -- supervisor -------------------------------------------------------------

    def _supervisor_handle(self, msg: AgentMessage) -> AgentMessage:
        payload = msg.payload
        if not isinstance(payload, Anomaly):
            # Protocol faults addressed at the Supervisor are logged directly.
            error = ProtocolError(AgentRole.SUPERVISOR, payload)
            self.log.append(AgentRole.SUPERVISOR, msg.msg_id, "protocol", str(error))
            return self._reply(AgentRole.SUPERVISOR, msg, ErrorReply(msg.msg_id, error))
        self.log.append(payload.source, payload.original_msg_id, payload.category, payload.detail)
        return self._reply(AgentRole.SUPERVISOR, msg, Ack(msg.msg_id))


# ---------------------------------------------------------------------------
# Entry -> definition helpers (performed by the Editor: parse + validate)


def _model_definition(entry: packs.ModelEntry) -> ModelDefinition:
    from .expr import parse

    return ModelDefinition(entry.id, entry.label, parse(entry.expression), entry.unit)


def _indicator_definition(entry: packs.IndicatorEntry) -> IndicatorDefinition:
    from .expr import parse

    return IndicatorDefinition(
        entry.id, entry.label, parse(entry.expression), entry.unit,
        entry.default_mode, entry.rules,
    )


def _definition(entry) -> IndexDefinition | ModelDefinition | IndicatorDefinition:
    if isinstance(entry, IndexDefinition):
        return entry
    if isinstance(entry, packs.ModelEntry):
        return _model_definition(entry)
    if isinstance(entry, packs.IndicatorEntry):
        return _indicator_definition(entry)
    raise TypeError(f"not a definition entry: {entry!r}")


# ---------------------------------------------------------------------------
# Series assembly (shared by the HTTP service and the CLI)


def collect_series(
    runtime: AgentRuntime, indicator_id: str, start: PeriodKey, end: PeriodKey,
    sender: str = "client",
) -> list[tuple[str, float]]:
    """Compute one indicator over every stored period in [start, end].

    Periods with missing index data are skipped (sparse series are normal);
    any other per-period failure is raised.  Candidate periods are the
    distinct period keys present in the value store with the same kind as
    ``start``/``end``.
    """
    if start.kind != end.kind:
        raise ValueError(f"period kinds differ: {start.kind} vs {end.kind}")
    snapshot = runtime.catalog
    if indicator_id not in snapshot.indicators:
        raise compute.UnknownIndicatorError(indicator_id)
    pairs: list[tuple[str, float]] = []
    for period in snapshot.periods():
        if period.kind != start.kind or not start.label <= period.label <= end.label:
            continue
        reply = runtime.request(ComputeRequest((indicator_id,), period), sender=sender)
        assert isinstance(reply.payload, ComputeResponse)
        outcome = reply.payload.outcomes[0]
        if outcome.error is None:
            pairs.append((period.label, outcome.report.value))
        elif not isinstance(outcome.error, compute.MissingIndexValueError):
            raise outcome.error
    return pairs
