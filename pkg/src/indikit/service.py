"""HTTP facade over the agent runtime.

Every mutation travels through the Editor agent and every computation
through the Arguer, so the API observes exactly the behavior (and anomaly
log) of the underlying runtime.  Reads work on immutable catalog snapshots
and never block behind writes.

Bodies use the pack-document entry schema (one schema everywhere); responses
use lower_snake_case keys.  Domain failures map onto a fixed error shape::

    {"code": "...", "message": "...", "ids": [...]}

with codes duplicate_id | unknown_dependency | cycle | unknown_id |
missing_value | evaluation_error | bad_request.
"""

from __future__ import annotations

from typing import Any

from fastapi import Body, FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from . import compute, packs
from .agents import (
    AgentRuntime,
    ComputeRequest,
    ComputeResponse,
    ErrorReply,
    InstallOutcome,
    ProtocolError,
    RegisterIndex,
    RegisterIndicator,
    RegisterModel,
    ReplaceDefinition,
    SetIndexValue,
    collect_series,
)
from .compute import IndicatorReport
from .expr import ExpressionError, unparse
from .registry import (
    Catalog,
    CycleDetectedError,
    DuplicateIdError,
    IndexValue,
    NonFiniteValueError,
    PeriodFormatError,
    PeriodKey,
    UnknownDependencyError,
    UnknownIdError,
    UnknownIndexError,
)
from .viz import EmptySeriesError, descriptor_to_wire, make_descriptor

__all__ = ["ApiException", "create_app", "export_pack", "serve"]

_SENDER = "client:http"


class ApiException(Exception):
    def __init__(self, status: int, code: str, message: str, ids: tuple[str, ...] = ()):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.ids = ids


def _api_error(exc: Exception) -> ApiException:
    """Total mapping from domain errors to API errors."""
    if isinstance(exc, DuplicateIdError):
        return ApiException(409, "duplicate_id", str(exc), (exc.id,))
    if isinstance(exc, UnknownDependencyError):
        return ApiException(422, "unknown_dependency", str(exc), exc.missing)
    if isinstance(exc, CycleDetectedError):
        return ApiException(422, "cycle", str(exc), exc.path)
    if isinstance(exc, (UnknownIdError, UnknownIndexError)):
        return ApiException(404, "unknown_id", str(exc), (exc.id,))
    if isinstance(exc, compute.UnknownIndicatorError):
        return ApiException(404, "unknown_id", str(exc), (exc.indicator_id,))
    if isinstance(exc, compute.MissingIndexValueError):
        return ApiException(409, "missing_value", str(exc), (exc.index_id,))
    if isinstance(exc, compute.EvaluationError):
        return ApiException(422, "evaluation_error", str(exc), (exc.node_id,))
    if isinstance(exc, EmptySeriesError):
        return ApiException(409, "missing_value", str(exc), (exc.indicator_id,))
    if isinstance(exc, NonFiniteValueError):
        return ApiException(422, "bad_request", str(exc))
    if isinstance(exc, (packs.PackFormatError, PeriodFormatError, ExpressionError,
                        ProtocolError, ValueError)):
        return ApiException(422, "bad_request", str(exc))
    return ApiException(400, "bad_request", str(exc))


def _interp_wire(interpretation: tuple[str, str] | None) -> dict | None:
    if interpretation is None:
        return None
    return {"label": interpretation[0], "severity": interpretation[1]}


def _report_wire(report: IndicatorReport) -> dict:
    return {
        "indicator_id": report.indicator_id,
        "period": report.period.label,
        "value": report.value,
        "unit": report.unit,
        "interpretation": _interp_wire(report.interpretation),
        "descriptor": descriptor_to_wire(report.descriptor),
        "intermediates": dict(report.intermediates),
    }


def export_pack(catalog: Catalog, name: str = "catalog-export") -> packs.Pack:
    """Snapshot the whole catalog (definitions and values) as a pack."""
    return packs.Pack(
        name=name,
        version=packs.PACK_SCHEMA_VERSION,
        indices=tuple(catalog.indices[i] for i in sorted(catalog.indices)),
        models=tuple(
            packs.ModelEntry(m.id, m.label, unparse(m.expression), m.unit)
            for m in (catalog.models[i] for i in sorted(catalog.models))
        ),
        indicators=tuple(
            packs.IndicatorEntry(
                d.id, d.label, unparse(d.expression), d.unit, d.default_mode, d.rules
            )
            for d in (catalog.indicators[i] for i in sorted(catalog.indicators))
        ),
        values=tuple(
            IndexValue(index_id, period, catalog.values[(index_id, period)])
            for index_id, period in sorted(
                catalog.values, key=lambda k: (k[0], k[1].kind, k[1].label)
            )
        ),
    )


def _period(label: str) -> PeriodKey:
    try:
        return PeriodKey.from_label(label)
    except PeriodFormatError as exc:
        raise ApiException(400, "bad_request", str(exc)) from None


def _mode(mode: str | None) -> str | None:
    if mode is not None and mode not in ("gauge", "text", "histogram"):
        raise ApiException(400, "bad_request", f"unknown visualization mode {mode!r}")
    return mode


def create_app(runtime: AgentRuntime | None = None, ui_dir: str | None = None) -> FastAPI:
    """Build the API application; starts the runtime if not already running.

    ``ui_dir`` optionally mounts a static web console under ``/ui``.
    """
    runtime = (runtime or AgentRuntime()).start()
    app = FastAPI(title="indikit service")
    app.state.runtime = runtime
    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    def ask(payload) -> Any:
        reply = runtime.request(payload, sender=_SENDER)
        if isinstance(reply.payload, ErrorReply):
            raise _api_error(reply.payload.error)
        return reply.payload

    def compute_one(indicator_id: str, period: PeriodKey, mode: str | None) -> IndicatorReport:
        response = ask(ComputeRequest((indicator_id,), period, mode))
        assert isinstance(response, ComputeResponse)
        outcome = response.outcomes[0]
        if outcome.error is not None:
            raise _api_error(outcome.error)
        return outcome.report

    @app.exception_handler(ApiException)
    async def on_api_error(_request: Request, exc: ApiException):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message, "ids": list(exc.ids)},
        )

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "bad_request", "message": str(exc), "ids": []},
        )

    # -- definitions --------------------------------------------------------

    @app.post("/indices", status_code=201)
    def post_index(body: dict = Body(...)):
        try:
            definition = packs.index_definition_from_doc(body)
        except (packs.PackFormatError, ValueError) as exc:
            raise _api_error(exc) from None
        ask(RegisterIndex(definition))
        return {"id": definition.id}

    @app.post("/models", status_code=201)
    def post_model(body: dict = Body(...)):
        try:
            entry = packs.model_entry_from_doc(body)
        except packs.PackFormatError as exc:
            raise _api_error(exc) from None
        ask(RegisterModel(entry))
        return {"id": entry.id}

    @app.post("/indicators", status_code=201)
    def post_indicator(body: dict = Body(...)):
        try:
            entry = packs.indicator_entry_from_doc(body)
        except packs.PackFormatError as exc:
            raise _api_error(exc) from None
        ask(RegisterIndicator(entry))
        return {"id": entry.id}

    @app.put("/models/{model_id}")
    def put_model(model_id: str, body: dict = Body(...)):
        try:
            entry = packs.model_entry_from_doc(body)
        except packs.PackFormatError as exc:
            raise _api_error(exc) from None
        if entry.id != model_id:
            raise ApiException(400, "bad_request",
                               f"body id {entry.id!r} does not match path id {model_id!r}")
        ask(ReplaceDefinition(model_id, entry))
        return {"id": model_id}

    @app.put("/indicators/{indicator_id}")
    def put_indicator(indicator_id: str, body: dict = Body(...)):
        try:
            entry = packs.indicator_entry_from_doc(body)
        except packs.PackFormatError as exc:
            raise _api_error(exc) from None
        if entry.id != indicator_id:
            raise ApiException(400, "bad_request",
                               f"body id {entry.id!r} does not match path id {indicator_id!r}")
        ask(ReplaceDefinition(indicator_id, entry))
        return {"id": indicator_id}

    # -- data ---------------------------------------------------------------

    @app.put("/indices/{index_id}/values", status_code=204)
    def put_value(index_id: str, body: dict = Body(...)):
        try:
            period_label = packs.require_key(body, "period", str, "value")
            raw = packs.require_key(body, "value", (int, float), "value")
        except packs.PackFormatError as exc:
            raise _api_error(exc) from None
        period = _period(period_label)
        ask(SetIndexValue(IndexValue(index_id, period, float(raw))))
        return None

    # -- listings -----------------------------------------------------------

    @app.get("/services")
    def get_services(tier: str = Query("all")):
        if tier not in ("index", "model", "indicator", "all"):
            raise ApiException(400, "bad_request", f"unknown tier {tier!r}")
        entries = runtime.catalog.list_services(tier)
        return [
            {"tier": e.tier, "id": e.id, "label": e.label, "unit": e.unit} for e in entries
        ]

    # -- computation ----------------------------------------------------------

    @app.get("/indicators/{indicator_id}")
    def get_indicator(indicator_id: str, period: str = Query(...),
                      mode: str | None = Query(None)):
        report = compute_one(indicator_id, _period(period), _mode(mode))
        return _report_wire(report)

    @app.post("/reports")
    def post_reports(body: dict = Body(...)):
        ids = body.get("ids")
        if not isinstance(ids, list) or not all(isinstance(i, str) for i in ids):
            raise ApiException(400, "bad_request", "'ids' must be a list of indicator ids")
        try:
            period_label = packs.require_key(body, "period", str, "request")
        except packs.PackFormatError as exc:
            raise _api_error(exc) from None
        period = _period(period_label)
        mode = _mode(body.get("mode"))
        response = ask(ComputeRequest(tuple(ids), period, mode))
        assert isinstance(response, ComputeResponse)
        entries = []
        for outcome in response.outcomes:
            if outcome.error is None:
                entries.append({
                    "indicator_id": outcome.indicator_id,
                    "status": "ok",
                    "report": _report_wire(outcome.report),
                })
            else:
                mapped = _api_error(outcome.error)
                entries.append({
                    "indicator_id": outcome.indicator_id,
                    "status": mapped.code,
                    "error": {"code": mapped.code, "message": mapped.message,
                              "ids": list(mapped.ids)},
                })
        return {"entries": entries}

    @app.get("/indicators/{indicator_id}/series")
    def get_series(indicator_id: str,
                   from_: str = Query(..., alias="from"),
                   to: str = Query(...),
                   mode: str = Query("histogram")):
        if mode != "histogram":
            raise ApiException(400, "bad_request", "series supports mode=histogram only")
        start, end = _period(from_), _period(to)
        snapshot = runtime.catalog
        try:
            pairs = collect_series(runtime, indicator_id, start, end, sender=_SENDER)
            descriptor = make_descriptor(
                indicator_id, "histogram",
                unit=snapshot.indicators[indicator_id].unit if indicator_id in snapshot.indicators else "",
                series=pairs,
            )
        except Exception as exc:
            raise _api_error(exc) from None
        return descriptor_to_wire(descriptor)

    # -- anomalies ------------------------------------------------------------

    @app.get("/anomalies")
    def get_anomalies(category: str | None = Query(None)):
        if category is not None and category not in ("validation", "evaluation", "protocol"):
            raise ApiException(400, "bad_request", f"unknown anomaly category {category!r}")
        return [
            {
                "seq": record.seq,
                "source": record.source.value,
                "original_msg_id": record.original_msg_id,
                "category": record.category,
                "detail": record.detail,
                "timestamp": record.timestamp,
            }
            for record in runtime.anomalies(category)
        ]

    # -- packs ----------------------------------------------------------------

    @app.post("/packs", status_code=207)
    def post_pack(body: dict = Body(...)):
        try:
            pack = packs.pack_from_document(body)
        except (packs.PackFormatError, ValueError) as exc:
            raise _api_error(exc) from None
        outcomes = runtime.install_pack(pack, sender=_SENDER)
        return {"entries": [_install_wire(outcome) for outcome in outcomes]}

    @app.get("/packs/export")
    def get_export():
        return packs.pack_to_document(export_pack(runtime.catalog))

    return app


def _install_wire(outcome: InstallOutcome) -> dict:
    entry = {"tier": outcome.tier, "id": outcome.id, "status": "ok"}
    if outcome.error is not None:
        mapped = _api_error(outcome.error)
        entry["status"] = mapped.code
        entry["error"] = {"code": mapped.code, "message": mapped.message, "ids": list(mapped.ids)}
    return entry


def serve(addr: str = "127.0.0.1:8000", runtime: AgentRuntime | None = None,
          ui_dir: str | None = None) -> None:
    """Run the API with uvicorn (blocking)."""
    import uvicorn

    host, _, port_text = addr.partition(":")
    app = create_app(runtime, ui_dir=ui_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port_text or "8000"), log_level="info")
