import pytest
from fastapi.testclient import TestClient

from app.main import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    assert client.get("/health").json() == {"status": "healthy"}
    assert client.get("/").json()["version"] == "0.1.0"


def test_eval_scalar(client):
    response = client.post("/api/v1/eval", json={"pipeline": "state(mu=0) | negativity"})
    assert response.status_code == 200
    body = response.json()
    assert body["kind"] == "scalar"
    assert body["value"] == pytest.approx(1.0, abs=1e-9)
    assert body["dims"] == [2, 3]
    assert body["dump"] is None


def test_eval_dump(client):
    response = client.post(
        "/api/v1/eval", json={"pipeline": "state(mu=0.1) | accel(part=qutrit, r=0.3) | dump"}
    )
    assert response.status_code == 200
    body = response.json()
    assert body["kind"] == "dump"
    assert body["dims"] == [2, 4]
    assert body["dump"].startswith("dims=2x4")


def test_eval_syntax_error(client):
    response = client.post("/api/v1/eval", json={"pipeline": "state(mu=0"})
    assert response.status_code == 400
    detail = response.json()["detail"]
    assert detail["offset"] == 10
    assert set(detail["expected"]) == {"','", "')'"}


def test_sweep(client):
    payload = {
        "mu": 0.0,
        "accelerated": "qubit",
        "filtered": {"target": "qutrit", "strength": 0.5, "mode": "channel"},
        "r_grid": [0.0, 0.4],
    }
    response = client.post("/api/v1/sweep", json=payload)
    assert response.status_code == 200
    rows = response.json()["rows"]
    assert [row["r"] for row in rows] == [0.0, 0.4]
    assert all(row["strength"] == 0.5 for row in rows)


def test_sweep_validation(client):
    response = client.post(
        "/api/v1/sweep", json={"mu": 0.9, "accelerated": "qubit", "r_grid": [0.0]}
    )
    assert response.status_code == 422


def test_figure(client):
    response = client.get("/api/v1/figures/4", params={"mu": 0.25})
    assert response.status_code == 200
    curves = response.json()
    assert len(curves) == 6
    assert curves[0]["scenario"]["filtered"] is None
    assert client.get("/api/v1/figures/9", params={"mu": 0}).status_code == 404


def test_check(client):
    body = client.get("/api/v1/check").json()
    assert body["passed"] is True
    statuses = {result["name"]: result["status"] for result in body["results"]}
    assert statuses["accelerated-qutrit table discrepancy"] == "EXPECTED-DISCREPANCY"
