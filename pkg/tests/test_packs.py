import math
import random

import pytest

from indikit.agents import AgentRuntime
from indikit.expr import DomainError, evaluate, parse
from indikit.packs import (
    IndicatorEntry,
    ModelEntry,
    Pack,
    PackFormatError,
    evm_pack,
    load_pack,
    model_install_order,
    pack_from_document,
    pack_to_document,
    save_pack,
    turc_pack,
)
from indikit.registry import CycleDetectedError, IndexValue, PeriodKey

from conftest import EVM_DATASET, MARCH, set_values


def _model_sources(pack: Pack) -> dict[str, str]:
    return {entry.id: entry.expression for entry in pack.models}


def _indicator_sources(pack: Pack) -> dict[str, str]:
    return {entry.id: entry.expression for entry in pack.indicators}


# ---------------------------------------------------------------------------
# earned-value pack contents


def test_evm_pack_formulas():
    models = _model_sources(evm_pack())
    indicators = _indicator_sources(evm_pack())
    assert indicators["CV"] == "EV - AC"
    assert indicators["SV"] == "EV - PV"
    assert models["CPI"] == "EV / AC"
    assert models["SPI"] == "EV / PV"
    assert models["EAC_CPI"] == "BAC / CPI"
    assert models["EAC_REESTIMATE"] == "AC + ETC_INPUT"
    assert models["EAC_ATYPICAL"] == "AC + BAC - EV"
    assert models["EAC_TYPICAL"] == "AC + (BAC - EV) / CPI"
    assert indicators["ETC"] == "EAC_CPI - AC"
    assert indicators["VAC"] == "BAC - EAC_CPI"


def test_evm_pack_index_set():
    assert {d.id for d in evm_pack().indices} == {"PV", "EV", "AC", "BAC", "ETC_INPUT"}


def test_evm_pack_worked_example(evm_runtime_with_data):
    from indikit.compute import compute_report

    expected = {
        "CV": -50.0,
        "SV": -100.0,
        "CPI_I": 400.0 / 450.0,
        "SPI_I": 0.8,
        "EAC_I": 1125.0,
        "ETC": 675.0,
        "VAC": -125.0,
    }
    outcomes = compute_report(evm_runtime_with_data.catalog, list(expected), MARCH)
    for outcome in outcomes:
        assert outcome.report.value == pytest.approx(expected[outcome.indicator_id], rel=1e-12)


def test_evm_pack_loads_with_zero_anomalies():
    with AgentRuntime() as runtime:
        assert all(o.ok for o in runtime.install_pack(evm_pack()))
        assert runtime.anomalies() == []


# ---------------------------------------------------------------------------
# Turc pack contents


@pytest.fixture(scope="module")
def turc_models():
    return {entry.id: parse(entry.expression) for entry in turc_pack().models}


@pytest.fixture(scope="module")
def turc_indicators():
    return {entry.id: parse(entry.expression) for entry in turc_pack().indicators}


def test_turc_pack_service_lists():
    pack = turc_pack()
    assert {d.id for d in pack.indices} == {"T", "Ra", "n", "N", "J", "lat", "a_coef", "b_coef"}
    assert sorted(_indicator_sources(pack)) == [
        "ET_decadal", "ET_monthly", "Rs_daily", "Rs_decadal", "T_decadal",
    ]


def test_turc_pack_loads_with_zero_anomalies():
    with AgentRuntime() as runtime:
        assert all(o.ok for o in runtime.install_pack(turc_pack()))
        assert runtime.anomalies() == []


def test_et_monthly_worked_example(turc_indicators):
    value = evaluate(turc_indicators["ET_monthly"], {"Rs": 150.0, "T": 20.0})
    assert value == pytest.approx(0.4 * 200 * 20 / 35, rel=1e-12)
    assert value == pytest.approx(45.714285714285715, rel=1e-9)


def test_et_coefficient_ratio(turc_indicators):
    rng = random.Random(13)
    for _ in range(100):
        env = {"Rs": rng.uniform(0.1, 400.0), "T": rng.uniform(0.1, 45.0)}
        decadal = evaluate(turc_indicators["ET_decadal"], env)
        monthly = evaluate(turc_indicators["ET_monthly"], env)
        assert decadal / monthly == pytest.approx(0.325, rel=1e-12)


def test_et_monthly_monotonic(turc_indicators):
    et = lambda Rs, T: evaluate(turc_indicators["ET_monthly"], {"Rs": Rs, "T": T})
    assert et(160, 20) > et(150, 20)  # increasing in Rs
    assert et(150, 21) > et(150, 20)  # increasing in T for T > 0


def test_declination_and_distance_bounds(turc_models):
    for day in range(1, 366):
        delta = evaluate(turc_models["delta"], {"J": day})
        dr = evaluate(turc_models["dr"], {"J": day})
        assert -0.409 <= delta <= 0.409
        assert 1 - 0.033 <= dr <= 1 + 0.033


def test_sunset_angle_at_equator(turc_models):
    phi = evaluate(turc_models["phi"], {"lat": 0.0})
    for delta in (-0.4, 0.0, 0.2):
        omega = evaluate(turc_models["omega_s"], {"phi": phi, "delta": delta})
        assert omega == pytest.approx(math.pi / 2, abs=1e-12)


def test_sunset_angle_polar_day_is_domain_error(turc_models):
    phi = evaluate(turc_models["phi"], {"lat": 80.0})
    delta = evaluate(turc_models["delta"], {"J": 172})
    assert abs(math.tan(phi) * math.tan(delta)) > 1
    with pytest.raises(DomainError):
        evaluate(turc_models["omega_s"], {"phi": phi, "delta": delta})


def test_radiation_linear_in_ra(turc_models):
    env = {"a_coef": 0.25, "b_coef": 0.5, "n": 8.0, "N": 12.0}
    single = evaluate(turc_models["Rs"], {**env, "Ra": 300.0})
    double = evaluate(turc_models["Rs"], {**env, "Ra": 600.0})
    assert double == pytest.approx(2 * single, rel=1e-15)


def test_turc_end_to_end_through_catalog():
    from indikit.compute import compute_report

    with AgentRuntime() as runtime:
        assert all(o.ok for o in runtime.install_pack(turc_pack()))
        decade = PeriodKey.from_label("2024-05-D1")
        set_values(runtime, decade, {
            "T": 20.0, "Ra": 600.0, "n": 8.0, "N": 12.0,
            "J": 135.0, "lat": 35.0, "a_coef": 0.25, "b_coef": 0.5,
        })
        outcomes = compute_report(
            runtime.catalog, ["Rs_decadal", "ET_decadal", "ET_monthly", "T_decadal"], decade
        )
        values = {o.indicator_id: o.report.value for o in outcomes}
        rs = 600.0 * (0.25 + 0.5 * 8.0 / 12.0)
        assert values["Rs_decadal"] == pytest.approx(rs, rel=1e-12)
        assert values["ET_decadal"] == pytest.approx(0.13 * (rs + 50) * 20 / 35, rel=1e-12)
        assert values["ET_monthly"] == pytest.approx(0.4 * (rs + 50) * 20 / 35, rel=1e-12)
        assert values["T_decadal"] == 20.0


# ---------------------------------------------------------------------------
# pack files


def test_save_load_identity(tmp_path):
    for pack in (evm_pack(), turc_pack()):
        path = tmp_path / f"{pack.name}.json"
        save_pack(pack, path)
        assert load_pack(path) == pack


def test_document_roundtrip_with_values():
    pack = Pack(
        "demo", "1",
        indices=evm_pack().indices,
        values=(IndexValue("PV", MARCH, 500.0),),
    )
    assert pack_from_document(pack_to_document(pack)) == pack


def test_load_empty_pack_into_empty_catalog():
    with AgentRuntime() as runtime:
        outcomes = runtime.install_pack(Pack("empty", "1"))
        assert outcomes == ()
        assert runtime.anomalies() == []
        assert runtime.catalog.list_services("all") == []


def test_pack_format_error_names_entry():
    doc = pack_to_document(evm_pack())
    del doc["models"][2]["expression"]
    with pytest.raises(PackFormatError) as excinfo:
        pack_from_document(doc)
    assert "models[2]" in str(excinfo.value)


def test_load_pack_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(PackFormatError):
        load_pack(path)


# ---------------------------------------------------------------------------
# install semantics


def test_cyclic_pack_entries_reported_and_rest_registered():
    pack = Pack(
        "cyclic", "1",
        indices=evm_pack().indices,
        models=(
            ModelEntry("A", "a", "B + 1", "ratio"),
            ModelEntry("B", "b", "A + 1", "ratio"),
            ModelEntry("CPI", "cpi", "EV / AC", "ratio"),
        ),
    )
    with AgentRuntime() as runtime:
        outcomes = runtime.install_pack(pack)
        by_id = {o.id: o for o in outcomes if o.tier == "model"}
        assert isinstance(by_id["A"].error, CycleDetectedError)
        assert isinstance(by_id["B"].error, CycleDetectedError)
        assert by_id["CPI"].ok
        assert "CPI" in runtime.catalog.models
        assert len(runtime.anomalies("validation")) == 2


def test_install_is_order_independent():
    base = evm_pack()
    baseline = None
    rng = random.Random(99)
    for _ in range(10):
        models = list(base.models)
        indicators = list(base.indicators)
        rng.shuffle(models)
        rng.shuffle(indicators)
        shuffled = Pack(base.name, base.version, base.indices, tuple(models), tuple(indicators))
        with AgentRuntime() as runtime:
            assert all(o.ok for o in runtime.install_pack(shuffled))
            set_values(runtime, MARCH, EVM_DATASET)
            from indikit.compute import compute_report

            ids = sorted(runtime.catalog.indicators)
            ids.remove("EAC_REESTIMATE_I")  # needs ETC_INPUT, not part of the dataset
            values = tuple(
                outcome.report.value
                for outcome in compute_report(runtime.catalog, ids, MARCH)
            )
        if baseline is None:
            baseline = values
        else:
            assert values == baseline  # bit-identical


def test_model_install_order_keeps_unknown_deps_for_catalog():
    ordered, doomed = model_install_order(
        [ModelEntry("M", "m", "mystery + 1", "ratio")], known_ids=set()
    )
    assert [entry.id for entry, _ in ordered] == ["M"]
    assert doomed == []


def test_model_install_order_flags_parse_failures():
    ordered, doomed = model_install_order(
        [ModelEntry("Bad", "b", "1 +", "ratio"), ModelEntry("Good", "g", "1 + 1", "ratio")],
        known_ids=set(),
    )
    assert [entry.id for entry, _ in ordered] == ["Good"]
    assert [entry.id for entry, _ in doomed] == ["Bad"]


def test_model_install_order_flags_self_loop():
    _, doomed = model_install_order([ModelEntry("S", "s", "S + 1", "ratio")], known_ids=set())
    assert len(doomed) == 1 and isinstance(doomed[0][1], CycleDetectedError)
