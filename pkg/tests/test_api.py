"""HTTP surface: endpoint payloads and error-code contract."""

from __future__ import annotations

import itertools

import pytest
from fastapi.testclient import TestClient

from ideamap.api import SessionStore, create_app

from conftest import ring_graph


@pytest.fixture()
def client():
    graph = ring_graph(100, chords=30, seed=17)
    counter = itertools.count()
    store = SessionStore(graph, clock=lambda: f"t{next(counter)}")
    return TestClient(create_app(store)), graph


def make_session(client, graph, seed=7):
    resp = client.post("/sessions", json={"root": graph.labels[0], "seed": seed})
    assert resp.status_code == 200
    return resp.json()


def test_create_session_returns_map(client):
    client, graph = client
    body = make_session(client, graph)
    assert "session_id" in body
    assert body["map"]["version"] == 1
    assert len(body["map"]["nodes"]) <= 6
    root_nodes = [n for n in body["map"]["nodes"] if n["provenance"] == "root"]
    assert len(root_nodes) == 1


def test_create_session_invalid_root(client):
    client, _ = client
    resp = client.post("/sessions", json={"root": "no such concept"})
    assert resp.status_code == 422
    assert resp.json()["error_code"] == "invalid_concept"


def test_get_session_and_not_found(client):
    client, graph = client
    body = make_session(client, graph)
    sid = body["session_id"]
    assert client.get(f"/sessions/{sid}").json() == body["map"]
    missing = client.get("/sessions/nope")
    assert missing.status_code == 404
    assert missing.json()["error_code"] == "not_found"


def test_suggestion_flow(client):
    client, graph = client
    body = make_session(client, graph)
    sid = body["session_id"]
    root_id = next(n["id"] for n in body["map"]["nodes"] if n["provenance"] == "root")

    batch = client.post(f"/sessions/{sid}/suggestions", json={"node_id": root_id})
    assert batch.status_code == 200
    payload = batch.json()
    assert payload["source"] == root_id
    assert payload["regime"] in ("bfs", "dfs")
    assert len(payload["suggestions"]) == 5

    # second request while pending
    again = client.post(f"/sessions/{sid}/suggestions", json={"node_id": root_id})
    assert again.status_code == 409
    assert again.json()["error_code"] == "pending_batch"

    # accept one
    chosen = payload["suggestions"][1]
    resolved = client.post(f"/sessions/{sid}/resolve", json={"accept": chosen})
    assert resolved.status_code == 200
    concepts = [n["concept"] for n in resolved.json()["map"]["nodes"]]
    assert chosen in concepts

    # resolving again is stale
    stale = client.post(f"/sessions/{sid}/resolve", json={"dismiss": True})
    assert stale.status_code == 409
    assert stale.json()["error_code"] == "stale_batch"


def test_resolve_concept_not_offered(client):
    client, graph = client
    body = make_session(client, graph)
    sid = body["session_id"]
    root_id = next(n["id"] for n in body["map"]["nodes"] if n["provenance"] == "root")
    offered = client.post(f"/sessions/{sid}/suggestions",
                          json={"node_id": root_id}).json()["suggestions"]
    outside = next(lab for lab in graph.labels if lab not in offered)
    resp = client.post(f"/sessions/{sid}/resolve", json={"accept": outside})
    assert resp.status_code == 422
    assert resp.json()["error_code"] == "invalid_concept"


def test_edits_endpoint(client):
    client, graph = client
    body = make_session(client, graph)
    sid = body["session_id"]
    map_doc = body["map"]
    root_id = next(n["id"] for n in map_doc["nodes"] if n["provenance"] == "root")
    on_map = {n["concept"] for n in map_doc["nodes"]}
    fresh = next(lab for lab in graph.labels if lab not in on_map)

    added = client.post(f"/sessions/{sid}/edits",
                        json={"action": "manual_add", "text": fresh,
                              "attach_to": root_id})
    assert added.status_code == 200
    new_id = added.json()["node_id"]

    moved = client.post(f"/sessions/{sid}/edits",
                        json={"action": "move", "node_id": new_id,
                              "x": 3.5, "y": -1.0})
    node = next(n for n in moved.json()["map"]["nodes"] if n["id"] == new_id)
    assert (node["x"], node["y"]) == (3.5, -1.0)

    # self link refused with the edit error code
    bad = client.post(f"/sessions/{sid}/edits",
                      json={"action": "link_add", "a": new_id, "b": new_id})
    assert bad.status_code == 422
    assert bad.json()["error_code"] == "invalid_edit"

    removed = client.post(f"/sessions/{sid}/edits",
                          json={"action": "remove_node", "node_id": new_id})
    assert removed.status_code == 200
    assert new_id not in [n["id"] for n in removed.json()["map"]["nodes"]]

    unknown = client.post(f"/sessions/{sid}/edits", json={"action": "explode"})
    assert unknown.status_code == 422


def test_export_endpoint(client):
    client, graph = client
    body = make_session(client, graph)
    sid = body["session_id"]
    root_id = next(n["id"] for n in body["map"]["nodes"] if n["provenance"] == "root")
    offered = client.post(f"/sessions/{sid}/suggestions",
                          json={"node_id": root_id}).json()["suggestions"]
    client.post(f"/sessions/{sid}/resolve", json={"accept": offered[0]})

    exported = client.get(f"/sessions/{sid}/export").json()
    assert exported["map"] == client.get(f"/sessions/{sid}").json()
    assert exported["log"]["entries"][0]["accepted"] == offered[0]
    assert exported["log"]["entries"][0]["offered"] == offered


def test_autocomplete_endpoint(client):
    client, graph = client
    prefix = graph.labels[0][:3]
    resp = client.get("/autocomplete", params={"q": prefix, "limit": 4})
    labels = resp.json()["labels"]
    assert labels
    assert len(labels) <= 4
    assert all(lab.startswith(prefix) for lab in labels)
    assert client.get("/autocomplete", params={"q": "zzzz"}).json()["labels"] == []
