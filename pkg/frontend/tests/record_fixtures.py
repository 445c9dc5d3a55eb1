"""Re-record the API fixtures used by the frontend contract tests.

Runs the real service in-process and captures responses verbatim, so the
tests exercise the UI against exactly what the backend ships.

Run from the repository root:  python frontend/tests/record_fixtures.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from indikit import AgentRuntime, evm_pack, pack_to_document, turc_pack
from indikit.service import create_app

OUT = Path(__file__).parent / "fixtures"

EVM_DATASET = {"BAC": 1000, "PV": 500, "EV": 400, "AC": 450}


def main() -> None:
    OUT.mkdir(exist_ok=True)
    written = []

    def record(name, payload):
        (OUT / f"{name}.json").write_text(
            json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )
        written.append(name)

    with AgentRuntime() as runtime:
        with TestClient(create_app(runtime)) as http:
            for pack in (evm_pack(), turc_pack()):
                assert http.post("/packs", json=pack_to_document(pack)).status_code == 207
            for index_id, value in EVM_DATASET.items():
                assert http.put(
                    f"/indices/{index_id}/values",
                    json={"period": "2024-03", "value": value},
                ).status_code == 204

            record("services", http.get("/services").json())
            record("anomalies_empty", http.get("/anomalies").json())
            record("report_cv_gauge", http.get(
                "/indicators/CV", params={"period": "2024-03", "mode": "gauge"}
            ).json())
            record("report_cv_text", http.get(
                "/indicators/CV", params={"period": "2024-03", "mode": "text"}
            ).json())
            record("reports_batch", http.post(
                "/reports",
                json={"ids": ["CV", "SV", "CPI_I", "NOPE"], "period": "2024-03",
                      "mode": "text"},
            ).json())

            for month, earned in [("2024-01", 100), ("2024-02", 250)]:
                http.put("/indices/EV/values", json={"period": month, "value": earned})
                http.put("/indices/AC/values", json={"period": month, "value": 450})
            record("series_cv", http.get(
                "/indicators/CV/series", params={"from": "2024-01", "to": "2024-03"}
            ).json())

            bad = http.post("/models", json={
                "id": "M", "label": "broken", "expression": "ghost + 1", "unit": "x",
            })
            assert bad.status_code == 422
            record("error_unknown_dependency", bad.json())
            record("anomalies_after", http.get("/anomalies").json())

    print("recorded:", ", ".join(written))


if __name__ == "__main__":
    main()
