import csv
import io
import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from qseries.service import create_app


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


def test_health(client):
    assert client.get("/health").json()["status"] == "ok"


def test_eval(client):
    body = client.post("/eval", json={"expr": "qbinom(4,2,0.5)"}).json()
    assert body["value"]["re"] == pytest.approx(2.1875)
    body = client.post("/eval", json={"expr": "qbinom(4,2,1/2)", "mode": "rational"}).json()
    assert body["value"]["exact"] == "35/16" and body["text"] == "35/16"


def test_parse_error_is_400_with_position(client):
    resp = client.post("/eval", json={"expr": "phi([0.3,0.5)"})
    assert resp.status_code == 400
    body = resp.json()
    assert body["error"] == "ParseError"
    assert (body["offset"], body["line"], body["column"]) == (12, 1, 13)
    assert "]" in body["expected"]


def test_math_error_is_422(client):
    resp = client.post("/eval", json={"expr": "phi([0.3,0.4],[0.5],0.5,1.5)"})
    assert resp.status_code == 422
    assert resp.json()["error"] == "ConvergenceError"


def test_unknown_identity_is_404(client):
    assert client.post("/verify", json={"id": "nope"}).status_code == 404
    assert client.get("/catalog/nope").status_code == 404


def test_invalid_config_is_400(client):
    resp = client.post("/verify-all", json={"samples": 0})
    assert resp.status_code == 400 and resp.json()["error"] == "ConfigError"
    assert client.post("/report?format=xml", json={}).status_code == 400


def test_verify_seeded_and_single_point(client):
    body = client.post("/verify", json={"id": "q_saalschutz", "samples": 3, "mode": "rational"}).json()
    assert body["summary"]["all_passed"] and body["entries"][0]["passed"] == 3
    point = {"a": 0.3, "b": 0.4, "c": 0.5, "q": 0.5, "z": "0.2"}
    body = client.post("/verify", json={"id": "heine_1", "params": point}).json()
    assert body["pass"] and body["catalog"] == "transforms"


def test_catalog_listing(client):
    assert "orthopoly" in client.get("/catalog").json()["catalogs"]
    entries = client.get("/catalog/identities").json()["entries"]
    by_id = {e["id"]: e for e in entries}
    assert by_id["q_saalschutz"]["rational_sampler"]
    assert not by_id["rogers_ramanujan_1"]["rational_sampler"]


def test_report_csv(client):
    resp = client.post("/report?format=csv", json={"identities": ["q_binomial"], "samples": 2})
    assert resp.headers["content-type"].startswith("text/csv")
    rows = list(csv.DictReader(io.StringIO(resp.text)))
    assert len(rows) == 2 and all(r["pass"] == "True" for r in rows)
