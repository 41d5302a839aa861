import pytest
from fastapi.testclient import TestClient

from kepinch.service import schemas
from kepinch.service.app import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_healthz(client):
    resp = client.get("/healthz")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok"}


def test_constants_endpoint(client):
    doc = client.get("/constants").json()
    assert doc["schema_version"] == 1
    names = [row["name"] for row in doc["thresholds"]]
    assert names == ["lower", "siu-yang", "improved", "guan", "upper"]
    guan = doc["thresholds"][3]
    assert guan["chi"] == 0.5


def test_analyze_endpoint(client):
    resp = client.post("/analyze", json={"a": -3, "b": -1, "bmod": 0.5})
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["schema_version"] == 1
    assert doc["summary"]["k_max"] == -2.25
    assert doc["regime"]["ratio"] == pytest.approx(4 / 9, abs=1e-12)
    assert doc["variational"]["phi"] == 0.5


def test_analyze_rejects_invalid_profile(client):
    assert client.post("/analyze", json={"a": -3, "b": -1, "bmod": -1}).status_code == 422
    # tau < 0 under the min-direction frame
    assert client.post("/analyze", json={"a": -3, "b": -1, "bmod": 5}).status_code == 422
    assert client.post("/analyze", json={"a": -3, "b": -1}).status_code == 422


def test_sweep_endpoint(client):
    resp = client.post("/sweep", json={"a": -3, "b": -1, "steps": 11})
    rows = resp.json()["rows"]
    assert len(rows) == 11
    assert rows[0]["t"] == 0.0
    assert rows[-1]["t"] == 1.0
    assert rows[0]["ratio"] == pytest.approx(2 / 3, abs=1e-15)


def test_sweep_rejects_degenerate_base(client):
    resp = client.post("/sweep", json={"a": 0, "b": 0, "steps": 3})
    assert resp.status_code == 422


def test_average_endpoint(client):
    resp = client.post(
        "/average", json={"a": -3, "b": -1, "bmod": 0.5, "samples": 2000, "seed": 5}
    )
    doc = resp.json()
    assert doc["closed_form"] == pytest.approx(-8 / 3, abs=1e-12)
    assert doc["exact_moment"] == pytest.approx(-8 / 3, abs=1e-12)
    assert doc["z_score"] < 6.0


def test_average_sample_floor(client):
    resp = client.post("/average", json={"a": -3, "b": -1, "bmod": 0.5, "samples": 10})
    assert resp.status_code == 422


def test_oracle_endpoint(client):
    resp = client.post("/oracle", json={"a": -5, "b": -1, "bmod": 1, "grid": 24})
    doc = resp.json()
    assert doc["max_abs_diff"] < 1e-6
    assert len(doc["tensor"]["components"]) == 16
    assert doc["closed"] == {"k_min": -5.0, "k_max": -3.0}


def test_certify_endpoint_uses_lambda_alias(client):
    payload = {"chi": 0.474, "lambda": 0.1, "samples": 500, "seed": 1}
    doc = client.post("/certify", json=payload).json()
    assert doc["lambda"] == 0.1
    assert "lam" not in doc
    assert doc["violation_count"] == 0
    assert doc["min_margin"] > 0


def test_certify_validation(client):
    bad = {"chi": 0.2, "lambda": 0.1, "samples": 100, "seed": 0}
    assert client.post("/certify", json=bad).status_code == 422


def test_lemma_test_endpoint(client):
    doc = client.post("/lemma-test", json={"samples": 3, "seed": 4}).json()
    assert doc["failures"] == []
    assert doc["max_three_index_residual"] <= 1e-7
    assert doc["max_gradient"] <= 1e-6


def test_analyze_is_deterministic(client):
    payload = {"a": -4.2, "b": -1.7, "bmod": 0.9}
    first = client.post("/analyze", json=payload).text
    second = client.post("/analyze", json=payload).text
    assert first == second


def test_response_models_round_trip():
    # the wire format parses back into the same model the handlers emit
    from kepinch.service import handlers

    req = schemas.CertifyRequest(chi=0.474, lam=0.1, samples=200, seed=2)
    resp = handlers.run_certify(req)
    doc = resp.model_dump(mode="json", by_alias=True)
    again = schemas.CertifyResponse.model_validate(doc)
    assert again == resp
