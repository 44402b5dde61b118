"""Tests for the HTTP layer: request validation, run lifecycle, reports."""

from __future__ import annotations

import time

import pytest
from fastapi.testclient import TestClient

from fieldscan.service import create_app


@pytest.fixture()
def client():
    with TestClient(create_app()) as c:
        yield c


def _wait(client, run_id, timeout=60.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        st = client.get(f"/runs/{run_id}").json()
        if st["state"] in ("complete", "interrupted", "failed"):
            return st
        time.sleep(0.05)
    raise TimeoutError(f"run {run_id} still {st['state']}")


def test_bounds_endpoint(client):
    resp = client.post("/bounds", json={"degree": 8, "r1": 2, "r2": 3,
                                        "norms": [2, 3, 5]})
    assert resp.status_code == 200
    rows = resp.json()
    assert [r["norm"] for r in rows] == [2, 3, 5]
    assert rows[0]["implied_bound"] > rows[1]["implied_bound"]


def test_bounds_unconditional_and_signature_dependence(client):
    real = client.post("/bounds", json={"degree": 8, "r1": 8, "r2": 0,
                                        "norms": []}).json()
    imag = client.post("/bounds", json={"degree": 8, "r1": 0, "r2": 4,
                                        "norms": []}).json()
    assert len(real) == len(imag) == 1
    assert real[0]["norm"] == 0
    assert real[0]["implied_bound"] != imag[0]["implied_bound"]


def test_bounds_rejects_bad_signature(client):
    resp = client.post("/bounds", json={"degree": 8, "r1": 3, "r2": 3, "norms": []})
    assert resp.status_code == 400


def test_plan_endpoint(client):
    resp = client.post("/plan", json={"degree": 3, "r1": 1, "r2": 1,
                                      "disc_bound": 23, "include_blocks": True})
    assert resp.status_code == 200
    cells = resp.json()
    assert len(cells) == 8
    assert all(c["total_blocks"] == 1 for c in cells)
    costs = [c["estimated_cost"] for c in cells]
    assert costs == sorted(costs, reverse=True)


def test_plan_rejects_bad_spec(client):
    resp = client.post("/plan", json={"degree": 3, "r1": 1, "r2": 1,
                                      "disc_bound": 23, "parity_values": [7]})
    assert resp.status_code == 400
    resp = client.post("/plan", json={"degree": 8, "r1": 2, "r2": 3,
                                      "disc_bound": 1})
    assert resp.status_code == 400


def test_verify_endpoint_mixed_verdicts(client):
    resp = client.post("/verify", json={
        "degree": 3, "r1": 1, "r2": 1, "disc_bound": 23,
        "polynomials": [[1, 0, -1, -1],    # the (1,1) cubic of disc -23
                        [1, 0, 1, 1],      # disc -31 cubic, over threshold
                        [1, 0, 0, -8],     # reducible
                        [1, 0, -3, 1],     # totally real, wrong signature
                        [2, 0, 1],         # not monic
                        [1, 1]]})          # wrong degree
    assert resp.status_code == 200
    verdicts = [(v["verdict"], v["detail"]) for v in resp.json()]
    assert verdicts[0] == ("accepted", "")
    assert resp.json()[0]["field_disc"] == -23
    assert verdicts[1] == ("rejected", "threshold")
    assert verdicts[2] == ("rejected", "reducible")
    assert verdicts[3] == ("rejected", "signature")
    assert verdicts[4][0] == "rejected"
    assert verdicts[5][0] == "rejected"


def test_run_lifecycle(client, tmp_path):
    body = {"degree": 3, "r1": 1, "r2": 1, "disc_bound": 50,
            "output_path": str(tmp_path / "r.txt"),
            "checkpoint_path": str(tmp_path / "c.json")}
    resp = client.post("/runs", json=body)
    assert resp.status_code == 202
    rid = resp.json()["run_id"]
    st = _wait(client, rid)
    assert st["state"] == "complete"
    assert st["min_abs_field_disc"] == 23
    assert st["chunks_done"] == st["chunks_total"]

    report = client.get(f"/runs/{rid}/report")
    assert report.status_code == 200
    data = report.json()
    assert data["min_abs_field_disc"] == 23
    assert [g["field_disc"] for g in data["groups"]] == [-23, -31, -44]
    assert data["stats"]["generated"] == (
        data["stats"]["passed"] + sum(data["stats"]["discarded"].values()))

    listing = client.get("/runs").json()
    assert rid in [j["run_id"] for j in listing]


def test_run_report_not_ready_is_conflict(client, tmp_path):
    body = {"degree": 4, "r1": 2, "r2": 1, "disc_bound": 300,
            "output_path": str(tmp_path / "r.txt"),
            "checkpoint_path": str(tmp_path / "c.json")}
    rid = client.post("/runs", json=body).json()["run_id"]
    resp = client.get(f"/runs/{rid}/report")
    # small race: the run may already be done on a fast machine
    assert resp.status_code in (200, 409)
    _wait(client, rid)
    assert client.get(f"/runs/{rid}/report").status_code == 200


def test_unknown_run_is_404(client):
    assert client.get("/runs/feedbeef").status_code == 404
    assert client.get("/runs/feedbeef/report").status_code == 404
    assert client.post("/runs/feedbeef/resume").status_code == 404


def test_run_bad_spec_is_400(client):
    resp = client.post("/runs", json={"degree": 3, "r1": 1, "r2": 1,
                                      "disc_bound": 0})
    assert resp.status_code == 400


def test_run_planning_failure_surfaces_as_failed(client, tmp_path):
    body = {"degree": 8, "r1": 2, "r2": 3, "disc_bound": 1,
            "output_path": str(tmp_path / "r.txt"),
            "checkpoint_path": str(tmp_path / "c.json")}
    rid = client.post("/runs", json=body).json()["run_id"]
    st = _wait(client, rid)
    assert st["state"] == "failed"
    assert st["error"].startswith("config:")


def test_resume_completed_run(client, tmp_path):
    body = {"degree": 3, "r1": 1, "r2": 1, "disc_bound": 50,
            "output_path": str(tmp_path / "r.txt"),
            "checkpoint_path": str(tmp_path / "c.json")}
    rid = client.post("/runs", json=body).json()["run_id"]
    first = _wait(client, rid)
    assert first["state"] == "complete"
    assert client.post(f"/runs/{rid}/resume").status_code == 202
    again = _wait(client, rid)
    assert again["state"] == "complete"
    assert again["min_abs_field_disc"] == 23
