#!/usr/bin/env python3
"""Re-record the frontend contract fixtures against the live service code.

Writes frontend/fixtures/transcript_*.json: full create/next/answer
exchanges for the flows the UI tests replay.
"""

import json
import pathlib
import sys
import tempfile

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from fastapi.testclient import TestClient

from pcmfill.service import create_app

OUT_DIR = pathlib.Path(__file__).resolve().parents[1] / "frontend" / "fixtures"


def record(client, name, n, budget=None, answers=None, n_answers=None, abandon=False):
    body = {"n": n}
    if budget is not None:
        body["budget"] = budget
    create = client.post("/sessions", json=body)
    doc = {"n": n, "create_request": body, "create_response": create.json(), "exchanges": []}
    sid = create.json()["id"]
    total = create.json()["total"]
    count = n_answers if n_answers is not None else total
    for k in range(count):
        nxt = client.get(f"/sessions/{sid}/next").json()
        value = answers[k] if answers else round(1.0 + 0.5 * (k % 4), 2)
        req = {"pair": nxt["pair"], "value": value}
        resp = client.post(f"/sessions/{sid}/answers", json=req)
        doc["exchanges"].append(
            {"next": nxt, "answer_request": req, "answer_response": resp.json()}
        )
    if abandon:
        # the page asks for the following question before the user stops
        doc["trailing_next"] = client.get(f"/sessions/{sid}/next").json()
        doc["abandon_response"] = client.post(f"/sessions/{sid}/abandon").json()
    doc["final"] = client.get(f"/sessions/{sid}").json()
    path = OUT_DIR / f"{name}.json"
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {path} ({len(doc['exchanges'])} exchanges)")


def main():
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        client = TestClient(create_app(store_path=f"{tmp}/sessions.jsonl"))
        record(client, "transcript_n4_main", 4)
        record(client, "transcript_n5_main", 5)
        record(client, "transcript_n6_main", 6)
        record(client, "transcript_n4_budget3", 4, budget=3, answers=[2.0, 4.0, 8.0])
        record(client, "transcript_n5_star", 5, budget=4, answers=[2.0, 3.0, 4.0, 5.0])
        record(client, "transcript_n4_abandon1", 4, n_answers=1, abandon=True)


if __name__ == "__main__":
    main()
