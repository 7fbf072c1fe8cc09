import math

import pytest
from fastapi.testclient import TestClient

from trisep import commands
from trisep.service.app import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


def test_classify_weak_point(client):
    resp = client.post("/classify", json={"eta0p": 0.0, "eta1p": 0.4,
                                          "nbar": 0.0, "tprime": "inf"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["state_class"] == "fully_inseparable"
    assert abs(body["zeta0"] - 0.8) < 1e-12
    assert abs(body["entries"]["aprime"] - 5.0) < 1e-9
    assert body["ppt"] == [False, False, False]
    assert "classification" in body["report"]


def test_classify_strong_point_serializes_infinities(client):
    resp = client.post("/classify", json={"eta0p": 0.4, "eta1p": 0.8,
                                          "nbar": 1.0, "tprime": "inf"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["state_class"] == "fully_separable"
    assert body["entries"]["aprime"] == "inf"
    assert body["method"] == "asymptotic-thresholds"


def test_classify_finite_time(client):
    resp = client.post("/classify", json={"eta0p": 0.0, "eta1p": 0.4,
                                          "tprime": 1.5})
    assert resp.status_code == 200
    assert resp.json()["tprime"] == 1.5


def test_classify_resonance_maps_to_422(client):
    resp = client.post("/classify", json={"eta0p": 1.0, "eta1p": 0.0,
                                          "tprime": "inf"})
    assert resp.status_code == 422
    assert resp.json()["detail"]["kind"] == "domain"


def test_classify_validation_error(client):
    resp = client.post("/classify", json={"eta0p": 0.0, "eta1p": 0.0,
                                          "nbar": -1.0})
    assert resp.status_code == 422


def test_evolve_endpoint_matches_commands(client):
    req = {"eta0p": 0.1, "eta1p": 0.2, "nbar": 0.0, "tmax": 2.0, "steps": 6}
    resp = client.post("/evolve", json=req)
    assert resp.status_code == 200
    body = resp.json()
    local = commands.evolve_trace(0.1, 0.2, 0.0, 2.0, 6)
    assert body["csv"] == local.csv
    assert body["rows"] == 6


def test_boundary_endpoint(client):
    resp = client.post("/boundary", json={
        "axes": [{"name": "eta1p", "start": 0.0, "stop": 1.0, "count": 5}],
        "fixed": {"eta0p": 0.0}, "which": "bisep"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["columns"][:2] == ["eta0p", "eta1p"]
    line = body["csv"].strip().split("\n")[3].split(",")
    assert abs(float(line[4]) - 2.75) < 1e-12


def test_boundary_endpoint_rejects_three_axes(client):
    axis = {"name": "eta1p", "start": 0.0, "stop": 1.0, "count": 5}
    resp = client.post("/boundary", json={"axes": [axis, axis, axis]})
    assert resp.status_code == 422


def test_figure_endpoint_matches_commands(client):
    resp = client.post("/figure", json={"n": 3})
    assert resp.status_code == 200
    body = resp.json()
    local = commands.figure_data(3)
    assert body["csv"] == local.csv
    assert body["meta"]["max_gap"] == pytest.approx(local.meta["max_gap"])


def test_verify_endpoint_quick(client):
    resp = client.post("/verify", json={"level": "quick"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["passed"] is True
    assert len(body["suites"]) == 5
    assert "overall: PASS" in body["report"]
