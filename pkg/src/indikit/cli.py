"""Operator command line.

State persists between invocations in a single pack document (definitions
plus a ``values`` section); the path comes from ``--state`` or the
``INDIKIT_STATE`` environment variable.  Exit codes: 0 success, 1 domain
errors (one line each), 2 usage errors.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .agents import AgentRuntime, ComputeRequest, ComputeResponse, ErrorReply, SetIndexValue, collect_series
from .packs import Pack, PackFormatError, load_pack, pack_to_document, save_pack
from .registry import PeriodFormatError, PeriodKey, parse_values_csv
from .service import export_pack
from .viz import make_descriptor, render_text

_SENDER = "client:cli"
_STATE_HELP = "state file (pack document with values); also via INDIKIT_STATE"


def _fail(message: str) -> None:
    click.echo(message, err=True)
    sys.exit(1)


def _open_runtime(state_path: str) -> AgentRuntime:
    runtime = AgentRuntime().start()
    path = Path(state_path)
    if path.exists():
        try:
            state = load_pack(path)
        except PackFormatError as exc:
            _fail(f"cannot read state file: {exc}")
        outcomes = runtime.install_pack(state, sender=_SENDER)
        bad = [o for o in outcomes if not o.ok]
        if bad:
            for outcome in bad:
                click.echo(f"state entry {outcome.id}: {outcome.error}", err=True)
            _fail(f"state file {state_path} did not load cleanly")
    return runtime


def _save_runtime(runtime: AgentRuntime, state_path: str) -> None:
    pack = export_pack(runtime.catalog, name="state")
    save_pack(pack, state_path)


def _parse_period(label: str) -> PeriodKey:
    try:
        return PeriodKey.from_label(label)
    except PeriodFormatError as exc:
        _fail(str(exc))
        raise AssertionError  # unreachable


@click.group()
@click.option("--state", "state_path", envvar="INDIKIT_STATE",
              default="indikit_state.json", show_default=True, help=_STATE_HELP)
@click.pass_context
def main(ctx: click.Context, state_path: str) -> None:
    """Decision-support engine: register services, enter data, compute indicators."""
    ctx.obj = state_path


@main.command("load-pack")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def load_pack_cmd(state_path: str, path: str) -> None:
    """Register every entry of a pack file (valid entries survive failures)."""
    try:
        pack: Pack = load_pack(path)
    except PackFormatError as exc:
        _fail(str(exc))
    runtime = _open_runtime(state_path)
    with runtime:
        outcomes = runtime.install_pack(pack, sender=_SENDER)
        _save_runtime(runtime, state_path)
    failures = [o for o in outcomes if not o.ok]
    for outcome in failures:
        click.echo(f"{outcome.tier} {outcome.id}: {outcome.error}", err=True)
    click.echo(f"registered {sum(o.ok for o in outcomes)}/{len(outcomes)} entries from {path}")
    if failures:
        sys.exit(1)


@main.command("set-index")
@click.argument("index_id")
@click.argument("period")
@click.argument("value", type=float)
@click.pass_obj
def set_index_cmd(state_path: str, index_id: str, period: str, value: float) -> None:
    """Store one index value for one period (upsert)."""
    from .registry import IndexValue

    key = _parse_period(period)
    runtime = _open_runtime(state_path)
    with runtime:
        reply = runtime.request(SetIndexValue(IndexValue(index_id, key, value)), sender=_SENDER)
        if isinstance(reply.payload, ErrorReply):
            _fail(str(reply.payload.error))
        _save_runtime(runtime, state_path)
    click.echo(f"{index_id}@{key.label} = {value}")


@main.command("import-values")
@click.argument("csv_path", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def import_values_cmd(state_path: str, csv_path: str) -> None:
    """Bulk-load index values from CSV (header: index_id,period,value)."""
    try:
        values = parse_values_csv(Path(csv_path).read_text(encoding="utf-8"))
    except ValueError as exc:
        _fail(str(exc))
    runtime = _open_runtime(state_path)
    failures = 0
    with runtime:
        for value in values:
            reply = runtime.request(SetIndexValue(value), sender=_SENDER)
            if isinstance(reply.payload, ErrorReply):
                failures += 1
                click.echo(f"{value.index_id}@{value.period.label}: {reply.payload.error}",
                           err=True)
        _save_runtime(runtime, state_path)
    click.echo(f"imported {len(values) - failures}/{len(values)} values")
    if failures:
        sys.exit(1)


@main.command("compute")
@click.argument("indicator_ids", nargs=-1, required=True)
@click.option("--period", required=True, help="period label (YYYY-MM, YYYY-MM-DD or YYYY-MM-D1..3)")
@click.option("--mode", type=click.Choice(["gauge", "text", "histogram"]), default=None,
              help="override each indicator's default visualization")
@click.pass_obj
def compute_cmd(state_path: str, indicator_ids: tuple[str, ...], period: str,
                mode: str | None) -> None:
    """Compute indicators for one period and render them as text."""
    key = _parse_period(period)
    runtime = _open_runtime(state_path)
    with runtime:
        reply = runtime.request(ComputeRequest(indicator_ids, key, mode), sender=_SENDER)
    assert isinstance(reply.payload, ComputeResponse)
    failures = 0
    for outcome in reply.payload.outcomes:
        if outcome.ok:
            for line in render_text(outcome.report.descriptor):
                click.echo(line)
        else:
            failures += 1
            click.echo(str(outcome.error), err=True)
    if failures:
        sys.exit(1)


@main.command("series")
@click.argument("indicator_id")
@click.argument("start")
@click.argument("end")
@click.pass_obj
def series_cmd(state_path: str, indicator_id: str, start: str, end: str) -> None:
    """Render one indicator across stored periods as a histogram."""
    start_key, end_key = _parse_period(start), _parse_period(end)
    runtime = _open_runtime(state_path)
    with runtime:
        try:
            pairs = collect_series(runtime, indicator_id, start_key, end_key, sender=_SENDER)
            unit = runtime.catalog.indicators[indicator_id].unit
            descriptor = make_descriptor(indicator_id, "histogram", unit=unit, series=pairs)
        except Exception as exc:
            _fail(str(exc))
    for line in render_text(descriptor):
        click.echo(line)


@main.command("list")
@click.argument("tier", type=click.Choice(["index", "model", "indicator", "all"]),
                default="all")
@click.pass_obj
def list_cmd(state_path: str, tier: str) -> None:
    """List registered services, sorted by id."""
    runtime = _open_runtime(state_path)
    with runtime:
        entries = runtime.catalog.list_services(tier)
    for entry in entries:
        click.echo(f"{entry.tier}\t{entry.id}\t{entry.label}\t{entry.unit}")


@main.command("anomalies")
@click.option("--category", type=click.Choice(["validation", "evaluation", "protocol"]),
              default=None)
@click.pass_obj
def anomalies_cmd(state_path: str, category: str | None) -> None:
    """Show the Supervisor's anomaly log for this invocation (state load included)."""
    runtime = _open_runtime(state_path)
    with runtime:
        records = runtime.anomalies(category)
    for record in records:
        click.echo(f"{record.seq}\t[{record.category}]\t{record.source.value}\t{record.detail}")


@main.command("serve")
@click.option("--addr", default="127.0.0.1:8000", show_default=True, help="host:port to bind")
@click.option("--pack", "pack_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="pack file to autoload on startup")
@click.option("--ui", "ui_dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="directory with the built web console, mounted under /ui")
@click.pass_obj
def serve_cmd(state_path: str, addr: str, pack_path: str | None, ui_dir: str | None) -> None:
    """Run the HTTP API (loads the state file, then the optional pack)."""
    from .service import serve

    runtime = _open_runtime(state_path)
    if pack_path is not None:
        try:
            pack = load_pack(pack_path)
        except PackFormatError as exc:
            _fail(str(exc))
        for outcome in runtime.install_pack(pack, sender=_SENDER):
            if not outcome.ok:
                click.echo(f"{outcome.tier} {outcome.id}: {outcome.error}", err=True)
    serve(addr, runtime, ui_dir=ui_dir)


if __name__ == "__main__":
    main()
