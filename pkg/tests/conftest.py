import hashlib

import pytest

from indikit import AgentRuntime, IndexValue, PeriodKey, SetIndexValue, evm_pack, unparse
from indikit.registry import Catalog

MARCH = PeriodKey.from_label("2024-03")

#: The worked earned-value dataset used throughout the suite.
EVM_DATASET = {"BAC": 1000.0, "PV": 500.0, "EV": 400.0, "AC": 450.0}


def catalog_fingerprint(catalog: Catalog) -> str:
    """Order-insensitive digest of the full catalog state."""
    parts = []
    for index_id in sorted(catalog.indices):
        parts.append(("index", repr(catalog.indices[index_id])))
    for model_id in sorted(catalog.models):
        model = catalog.models[model_id]
        parts.append(("model", model.id, model.label, unparse(model.expression), model.unit))
    for indicator_id in sorted(catalog.indicators):
        ind = catalog.indicators[indicator_id]
        parts.append(
            ("indicator", ind.id, ind.label, unparse(ind.expression), ind.unit,
             ind.default_mode, repr(ind.rules))
        )
    for (index_id, period), value in sorted(
        catalog.values.items(), key=lambda kv: (kv[0][0], kv[0][1].kind, kv[0][1].label)
    ):
        parts.append(("value", index_id, period.kind, period.label, repr(value)))
    return hashlib.sha256(repr(parts).encode()).hexdigest()


def set_values(runtime: AgentRuntime, period: PeriodKey, values: dict[str, float],
               sender: str = "client") -> None:
    for index_id, value in values.items():
        reply = runtime.request(SetIndexValue(IndexValue(index_id, period, value)), sender=sender)
        assert not hasattr(reply.payload, "error"), f"set {index_id} failed: {reply.payload}"


@pytest.fixture
def evm_runtime():
    with AgentRuntime() as runtime:
        outcomes = runtime.install_pack(evm_pack())
        assert all(o.ok for o in outcomes)
        assert runtime.anomalies() == []
        yield runtime


@pytest.fixture
def evm_runtime_with_data(evm_runtime):
    set_values(evm_runtime, MARCH, EVM_DATASET)
    return evm_runtime
