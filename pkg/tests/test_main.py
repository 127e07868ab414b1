# tests/test_main.py

import pytest
from fastapi.testclient import TestClient

from main import app

XY = {"divisor_names": ["x", "y"], "nerve": "full", "divisors": [{"x": 1}, {"y": 1}], "toric": True}
X2Y = {"divisor_names": ["x", "y"], "nerve": "full", "divisors": [{"x": 2}, {"y": 1}], "toric": True}


@pytest.fixture
def client():
    return TestClient(app)


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_principalize(client):
    response = client.post("/principalize", json=X2Y)
    assert response.status_code == 200
    trace = response.json()
    assert trace["certificate"] == "Principalized"
    assert [step["sigma_before"] for step in trace["steps"]] == [[2, 1], [1, 1]]
    assert trace["steps"][-1]["sigma_after"] == "-inf"


def test_principalize_step_cap(client):
    response = client.post("/principalize", params={"max_steps": 0}, json=XY)
    assert response.status_code == 500
    assert "cap" in response.json()["detail"]


def test_principalize_rejects_negative_cap(client):
    assert client.post("/principalize", params={"max_steps": -1}, json=XY).status_code == 422


def test_principalize_invalid_instance(client):
    body = {"divisor_names": ["x", "y", "z"], "nerve": [["x", "y"]], "divisors": [{"x": 1}, {"y": 1}]}
    response = client.post("/principalize", json=body)
    assert response.status_code == 400
    assert response.json()["detail"].startswith("EmptyNerveSingleton")


def test_principalize_unknown_name(client):
    body = {"divisor_names": ["x"], "divisors": [{"x": 1}, {"q": 1}]}
    assert client.post("/principalize", json=body).status_code == 422


def test_sigma(client):
    response = client.post("/sigma", json=XY)
    assert response.status_code == 200
    assert response.json() == {
        "report": {"sigma": [1, 1], "tau": 1, "achieving_pairs": [[0, 1]]},
        "locally_principal": False,
    }


def test_verify(client):
    trace = client.post("/principalize", json=X2Y).json()
    response = client.post("/verify", json={"instance": X2Y, "trace": trace})
    assert response.status_code == 200
    report = response.json()
    assert report["ok"] is True
    assert report["leaf_count"] == 3


def test_verify_truncated(client):
    trace = client.post("/principalize", json=X2Y).json()
    trace["steps"] = trace["steps"][:1]
    report = client.post("/verify", json={"instance": X2Y, "trace": trace}).json()
    assert report["ok"] is False
    assert report["failures"] == [[[1, 0]]]


def test_verify_non_toric(client):
    trace = client.post("/principalize", json=XY).json()
    instance = dict(XY, toric=False)
    assert client.post("/verify", json={"instance": instance, "trace": trace}).status_code == 400


def test_verify_other_divisors(client):
    trace = client.post("/principalize", json=XY).json()
    assert client.post("/verify", json={"instance": X2Y, "trace": trace}).status_code == 400


def test_export_dot(client):
    trace = client.post("/principalize", json=XY).json()
    response = client.post("/export_dot", json=trace)
    assert response.status_code == 200
    assert response.text.startswith("digraph tower {")
    assert '"X1" -> "X0"' in response.text


def test_principalize_bad_step_cap_setting(client, monkeypatch):
    monkeypatch.setenv("PRINCIPALIZE_MAX_STEPS", "lots")
    response = client.post("/principalize", json=XY)
    assert response.status_code == 400
    assert "PRINCIPALIZE_MAX_STEPS" in response.json()["detail"]


def test_verify_missing_coefficient_rows(client):
    trace = client.post("/principalize", json=XY).json()
    trace["steps"][0]["pulled_back_coeffs"] = trace["steps"][0]["pulled_back_coeffs"][:1]
    assert client.post("/verify", json={"instance": XY, "trace": trace}).status_code == 422


def test_principalize_negative_step_cap_setting(client, monkeypatch):
    monkeypatch.setenv("PRINCIPALIZE_MAX_STEPS", "-3")
    assert client.post("/principalize", json=XY).status_code == 400
