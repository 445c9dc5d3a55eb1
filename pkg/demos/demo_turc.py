"""Evapotranspiration walkthrough: the Turc pack over a growing season.

Enters decadal weather data for three ten-day periods, computes the
potential evapotranspiration for each, and renders the season as a
histogram.

Run:  python demos/demo_turc.py
"""

import math

from indikit import (
    AgentRuntime,
    ComputeRequest,
    IndexValue,
    PeriodKey,
    SetIndexValue,
    collect_series,
    evaluate,
    make_descriptor,
    parse,
    render_text,
    turc_pack,
)

# (period, mean temp °C, extraterrestrial radiation, sunshine h, day length h, day-of-year)
SEASON = [
    ("2024-05-D1", 16.0, 820.0, 7.5, 14.1, 125),
    ("2024-05-D2", 18.5, 840.0, 8.8, 14.4, 135),
    ("2024-05-D3", 21.0, 860.0, 9.6, 14.7, 146),
]


def enter_season(runtime):
    for label, temp, ra, sunshine, daylength, day in SEASON:
        period = PeriodKey.from_label(label)
        for index_id, value in {
            "T": temp, "Ra": ra, "n": sunshine, "N": daylength, "J": day,
            "lat": 35.0, "a_coef": 0.25, "b_coef": 0.5,
        }.items():
            runtime.request(SetIndexValue(IndexValue(index_id, period, value)))


def solar_geometry(runtime, day):
    # the solar-geometry models are registered services in their own right
    models = runtime.catalog.models
    env = {"J": float(day), "lat": 35.0}
    for model_id in ("phi", "dr", "delta", "omega_s"):
        env[model_id] = evaluate(models[model_id].expression, env)
        print(f"  {model_id:<8} = {env[model_id]:.6f} {models[model_id].unit}")
    daylight = 24 / math.pi * env["omega_s"]
    print(f"  (implies about {daylight:.1f} h of daylight)")


def main():
    with AgentRuntime() as runtime:
        assert all(o.ok for o in runtime.install_pack(turc_pack()))
        enter_season(runtime)

        print("== solar geometry for day 135 at 35°N ==")
        solar_geometry(runtime, 135)

        print("\n== one decade in detail ==")
        period = PeriodKey.from_label("2024-05-D2")
        reply = runtime.request(ComputeRequest(("Rs_decadal", "ET_decadal"), period))
        for outcome in reply.payload.outcomes:
            for line in render_text(outcome.report.descriptor):
                print("  " + line)

        print("\n== the season at a glance ==")
        pairs = collect_series(
            runtime, "ET_decadal",
            PeriodKey.from_label("2024-05-D1"), PeriodKey.from_label("2024-05-D3"),
        )
        histogram = make_descriptor("ET_decadal", "histogram", unit="mm/decade", series=pairs)
        for line in render_text(histogram):
            print("  " + line)


if __name__ == "__main__":
    main()
