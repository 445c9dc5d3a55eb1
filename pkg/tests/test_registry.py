import pytest

from indikit.expr import parse
from indikit.registry import (
    Catalog,
    CycleDetectedError,
    DuplicateIdError,
    IndexDefinition,
    IndexValue,
    IndicatorDefinition,
    InterpretationRule,
    ModelDefinition,
    NonFiniteValueError,
    PeriodFormatError,
    PeriodKey,
    UnknownDependencyError,
    UnknownIdError,
    UnknownIndexError,
    parse_values_csv,
)

MARCH = PeriodKey.from_label("2024-03")


def index(identifier, unit="currency"):
    return IndexDefinition(identifier, identifier.title(), unit)


def model(identifier, source):
    return ModelDefinition(identifier, identifier, parse(source), "ratio")


def indicator(identifier, source, rules=()):
    return IndicatorDefinition(identifier, identifier, parse(source), "currency", "text", rules)


@pytest.fixture
def base():
    catalog = Catalog.empty()
    for name in ("EV", "AC", "PV", "BAC"):
        catalog = catalog.register_index(index(name))
    return catalog


# ---------------------------------------------------------------------------
# periods


def test_period_kinds():
    assert PeriodKey.from_label("2024-03-17").kind == "day"
    assert PeriodKey.from_label("2024-03-D2").kind == "decade"
    assert PeriodKey.from_label("2024-03").kind == "month"


@pytest.mark.parametrize("label", ["2024", "2024-13", "2024-03-32", "2024-03-D4", "03-2024", "x"])
def test_period_rejects_bad_labels(label):
    with pytest.raises(PeriodFormatError):
        PeriodKey.from_label(label)


def test_period_kind_label_mismatch():
    with pytest.raises(PeriodFormatError):
        PeriodKey("day", "2024-03")


# ---------------------------------------------------------------------------
# indices and values


def test_register_index_retrievable():
    catalog = Catalog.empty().register_index(index("PV"))
    assert catalog.indices["PV"].label == "Pv"


def test_register_index_duplicate(base):
    before = base
    with pytest.raises(DuplicateIdError):
        base.register_index(index("EV"))
    assert base == before


def test_register_index_celsius_unit():
    catalog = Catalog.empty().register_index(IndexDefinition("T", "mean air temperature", "°C"))
    assert catalog.indices["T"].unit == "°C"


def test_index_unit_must_be_nonempty():
    with pytest.raises(ValueError):
        IndexDefinition("X", "x", "")


def test_set_and_read_value(base):
    catalog = base.set_index_value(IndexValue("PV", MARCH, 500))
    assert catalog.value_for("PV", MARCH) == 500


def test_set_value_upsert(base):
    catalog = base.set_index_value(IndexValue("PV", MARCH, 500))
    catalog = catalog.set_index_value(IndexValue("PV", MARCH, 640))
    assert catalog.value_for("PV", MARCH) == 640


def test_set_value_unknown_index(base):
    with pytest.raises(UnknownIndexError):
        base.set_index_value(IndexValue("nope", MARCH, 1))


def test_set_value_must_be_finite(base):
    with pytest.raises(NonFiniteValueError):
        base.set_index_value(IndexValue("PV", MARCH, float("nan")))


# ---------------------------------------------------------------------------
# models


def test_register_model_over_indices(base):
    catalog = base.register_model(model("CPI", "EV/AC"))
    assert "CPI" in catalog.models


def test_register_model_unknown_dependency(base):
    before = base
    with pytest.raises(UnknownDependencyError) as excinfo:
        base.register_model(model("M", "X + 1"))
    assert excinfo.value.missing == ("X",)
    assert base == before


def test_model_may_reference_model(base):
    catalog = base.register_model(model("CPI", "EV/AC"))
    catalog = catalog.register_model(model("EAC", "BAC / CPI"))
    assert "EAC" in catalog.models


def test_replace_creating_cycle_detected(base):
    catalog = base.register_model(model("B", "EV + 1"))
    catalog = catalog.register_model(model("A", "B + 1"))
    with pytest.raises(CycleDetectedError) as excinfo:
        catalog.replace_definition("B", model("B", "A + 1"))
    path = excinfo.value.path
    assert path[0] == path[-1] and set(path) == {"A", "B"}


def test_replace_self_reference_detected(base):
    catalog = base.register_model(model("M", "EV + 1"))
    with pytest.raises(CycleDetectedError):
        catalog.replace_definition("M", model("M", "M + 1"))


def test_model_cannot_shadow_index(base):
    with pytest.raises(DuplicateIdError):
        base.register_model(model("EV", "AC + 1"))


# ---------------------------------------------------------------------------
# indicators


def test_register_indicator_with_rules(base):
    rules = (InterpretationRule("lt", 0, "over budget", "bad"),
             InterpretationRule("gt", 0, "under budget", "good"))
    catalog = base.register_indicator(indicator("CV", "EV - AC", rules))
    assert catalog.indicators["CV"].rules == rules


def test_indicator_cannot_reference_indicator(base):
    catalog = base.register_indicator(indicator("CV", "EV - AC"))
    with pytest.raises(UnknownDependencyError) as excinfo:
        catalog.register_indicator(indicator("CV2", "CV * 2"))
    assert excinfo.value.missing == ("CV",)


def test_indicator_empty_rules_ok(base):
    catalog = base.register_indicator(indicator("CV", "EV - AC"))
    assert catalog.indicators["CV"].rules == ()


def test_indicator_threshold_must_be_finite(base):
    rules = (InterpretationRule("lt", float("inf"), "x", "bad"),)
    with pytest.raises(NonFiniteValueError):
        base.register_indicator(indicator("CV", "EV - AC", rules))


# ---------------------------------------------------------------------------
# replace


def test_replace_model_keeps_dependents(base):
    catalog = base.register_model(model("CPI", "EV/AC"))
    catalog = catalog.register_model(model("EAC", "BAC / CPI"))
    updated = catalog.replace_definition("CPI", model("CPI", "EV / AC"))
    assert "EAC" in updated.models


def test_replace_unknown_id(base):
    with pytest.raises(UnknownIdError):
        base.replace_definition("nope", model("nope", "EV"))


def test_replace_id_mismatch(base):
    catalog = base.register_model(model("CPI", "EV/AC"))
    with pytest.raises(ValueError):
        catalog.replace_definition("CPI", model("SPI", "EV/PV"))


def test_replace_wrong_tier(base):
    catalog = base.register_model(model("CPI", "EV/AC"))
    with pytest.raises(UnknownIdError):
        catalog.replace_definition("EV", model("EV", "AC"))


def test_replace_index_metadata(base):
    updated = base.replace_definition("EV", IndexDefinition("EV", "Earned Value", "EUR"))
    assert updated.indices["EV"].unit == "EUR"


# ---------------------------------------------------------------------------
# listing and atomicity


def test_list_services_sorted(base):
    catalog = base.register_index(index("ETC_INPUT"))
    listing = catalog.list_services("index")
    assert [entry.id for entry in listing] == ["AC", "BAC", "ETC_INPUT", "EV", "PV"]
    assert all(entry.tier == "index" for entry in listing)


def test_list_services_empty():
    assert Catalog.empty().list_services("all") == []


def test_failed_operations_leave_catalog_equal(base):
    catalog = base.register_model(model("CPI", "EV/AC"))
    snapshot = catalog
    for attempt in (
        lambda: catalog.register_index(index("EV")),
        lambda: catalog.register_model(model("M", "X + 1")),
        lambda: catalog.register_indicator(indicator("I", "nope + 1")),
        lambda: catalog.set_index_value(IndexValue("nope", MARCH, 1)),
        lambda: catalog.replace_definition("CPI", model("CPI", "CPI + 1")),
    ):
        with pytest.raises(Exception):
            attempt()
        assert catalog == snapshot


def test_operations_return_new_catalogs(base):
    updated = base.set_index_value(IndexValue("EV", MARCH, 1))
    assert base.value_for("EV", MARCH) is None
    assert updated.value_for("EV", MARCH) == 1


# ---------------------------------------------------------------------------
# CSV


def test_parse_values_csv_roundtrip():
    text = "index_id,period,value\nPV,2024-03,500\nEV,2024-03-D1,400.5\n"
    values = parse_values_csv(text)
    assert values == [
        IndexValue("PV", MARCH, 500.0),
        IndexValue("EV", PeriodKey.from_label("2024-03-D1"), 400.5),
    ]


def test_parse_values_csv_rejects_bad_header():
    with pytest.raises(ValueError):
        parse_values_csv("id,period,value\n")


def test_parse_values_csv_names_bad_row():
    with pytest.raises(ValueError) as excinfo:
        parse_values_csv("index_id,period,value\nPV,2024-99,5\n")
    assert "row 2" in str(excinfo.value)
