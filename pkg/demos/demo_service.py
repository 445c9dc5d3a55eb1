"""HTTP API tour against an in-process server (no network needed).

The same flows the web console uses: install a pack, push values, read a
gauge report, watch the anomaly log grow after a bad registration.

Run:  python demos/demo_service.py
For a real server:  indikit serve --addr 127.0.0.1:8000 --pack <pack.json>
"""

import json

from fastapi.testclient import TestClient

from indikit import AgentRuntime, evm_pack, pack_to_document
from indikit.service import create_app


def main():
    with AgentRuntime() as runtime:
        app = create_app(runtime)
        with TestClient(app) as http:
            r = http.post("/packs", json=pack_to_document(evm_pack()))
            print("POST /packs ->", r.status_code,
                  f"({sum(e['status'] == 'ok' for e in r.json()['entries'])} entries ok)")

            for index_id, value in {"BAC": 1000, "PV": 500, "EV": 400, "AC": 450}.items():
                http.put(f"/indices/{index_id}/values",
                         json={"period": "2024-03", "value": value})

            r = http.get("/indicators/CV", params={"period": "2024-03", "mode": "gauge"})
            print("\nGET /indicators/CV?mode=gauge ->", r.status_code)
            print(json.dumps(r.json()["descriptor"], indent=2))

            # a bad registration: rejected AND visible on the anomaly log
            r = http.post("/models", json={
                "id": "M", "label": "broken", "expression": "ghost + 1", "unit": "x",
            })
            print("\nPOST /models with unknown symbol ->", r.status_code, r.json())
            r = http.get("/anomalies")
            print("GET /anomalies ->", [(a["seq"], a["category"], a["detail"])
                                        for a in r.json()])


if __name__ == "__main__":
    main()
