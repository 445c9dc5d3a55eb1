"""Project-control walkthrough: load the earned-value pack, enter one
period of figures, and read the indicators the way a project manager would.

Run:  python demos/demo_evm.py
"""

from indikit import (
    AgentRuntime,
    ComputeRequest,
    IndexValue,
    PeriodKey,
    SetIndexValue,
    evm_pack,
    render_text,
)


def show_catalog(runtime):
    print("== registered services ==")
    for entry in runtime.catalog.list_services("all"):
        print(f"  {entry.tier:<9} {entry.id:<18} {entry.label} [{entry.unit}]")


def enter_period_figures(runtime, period):
    # a project budgeted at 1000, half-way point: planned 500, earned 400,
    # spent 450 -- late and over cost
    figures = {"BAC": 1000, "PV": 500, "EV": 400, "AC": 450, "ETC_INPUT": 700}
    for index_id, value in figures.items():
        runtime.request(SetIndexValue(IndexValue(index_id, period, value)))
    print(f"\nentered figures for {period.label}: {figures}")


def read_indicators(runtime, period):
    ids = ("CV", "SV", "CPI_I", "SPI_I", "EAC_I", "ETC", "VAC")
    reply = runtime.request(ComputeRequest(ids, period))
    print("\n== indicator readings ==")
    for outcome in reply.payload.outcomes:
        for line in render_text(outcome.report.descriptor):
            print("  " + line)
    # the audit trail: every intermediate that went into EAC
    eac = next(o for o in reply.payload.outcomes if o.indicator_id == "EAC_I")
    print("\nEAC audit trail:", eac.report.intermediates)


def main():
    with AgentRuntime() as runtime:
        outcomes = runtime.install_pack(evm_pack())
        assert all(o.ok for o in outcomes), "built-in pack must load cleanly"
        show_catalog(runtime)
        period = PeriodKey.from_label("2024-03")
        enter_period_figures(runtime, period)
        read_indicators(runtime, period)


if __name__ == "__main__":
    main()
