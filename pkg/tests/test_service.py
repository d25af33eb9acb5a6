import io
import json

import pytest
from fastapi.testclient import TestClient

from mailscope.service import ServiceConfig, create_app

from conftest import seed_dataset
from test_ingest import MBOX_THREE


@pytest.fixture
def client(tmp_path, five_docs):
    app = create_app(ServiceConfig(data_dir=str(tmp_path / "data")))
    store = app.state.mailscope.store
    handle = seed_dataset(store, five_docs)
    with TestClient(app) as c:
        c.dataset_id = handle.dataset_id
        yield c


def _session(client):
    response = client.post("/sessions", json={"dataset_id": client.dataset_id})
    assert response.status_code == 200, response.text
    return response.json()


def test_upload_and_list_datasets(client):
    response = client.post(
        "/datasets",
        files={"file": ("three.mbox", io.BytesIO(MBOX_THREE), "application/mbox")},
        data={"format": "mbox", "label": "uploaded"},
    )
    assert response.status_code == 200, response.text
    body = response.json()
    assert body["record_count"] == 3
    listing = client.get("/datasets").json()
    assert any(d["dataset_id"] == body["dataset_id"] for d in listing)


def test_upload_bad_format_is_400(client):
    response = client.post(
        "/datasets",
        files={"file": ("x.bin", io.BytesIO(b"zzz"), "application/octet-stream")},
        data={"format": "pst"},
    )
    assert response.status_code == 400
    assert response.json()["code"] == "UnknownFormat"


def test_create_session_and_full_match(client):
    session = _session(client)
    assert session["match_count"] == 5
    assert session["filters"] == []


def test_unknown_dataset_404(client):
    response = client.post("/sessions", json={"dataset_id": "nope"})
    assert response.status_code == 404
    assert response.json()["code"] == "UnknownDataset"


def test_filter_narrows_and_all_panels_share_fingerprint(client):
    session = _session(client)
    sid = session["session_id"]
    added = client.post(f"/sessions/{sid}/filters", json={"field": "content", "value": "money"})
    assert added.status_code == 200
    summary = added.json()
    assert summary["match_count"] == 2
    fingerprint = summary["fingerprint"]

    panels = [
        client.get(f"/sessions/{sid}/results").json(),
        client.get(f"/sessions/{sid}/correspondents").json(),
        client.get(f"/sessions/{sid}/timeline", params={"granularity": "year"}).json(),
        client.get(f"/sessions/{sid}/entities", params={"k": 5}).json(),
        client.get(f"/sessions/{sid}/graph").json(),
        client.get(f"/sessions/{sid}/cluster").json(),
    ]
    assert all(p["fingerprint"] == fingerprint for p in panels)

    bins = panels[2]["bins"]
    assert sum(b["count"] for b in bins) == 2  # timeline reflects the narrowed set


def test_duplicate_filter_409(client):
    sid = _session(client)["session_id"]
    client.post(f"/sessions/{sid}/filters", json={"field": "content", "value": "money"})
    dup = client.post(f"/sessions/{sid}/filters", json={"field": "content", "value": "money"})
    assert dup.status_code == 409
    assert dup.json()["code"] == "DuplicateFilter"


def test_delete_unknown_filter_404(client):
    sid = _session(client)["session_id"]
    response = client.delete(f"/sessions/{sid}/filters/nonesuch")
    assert response.status_code == 404
    assert response.json()["code"] == "UnknownFilter"


def test_remove_filter_restores(client):
    sid = _session(client)["session_id"]
    added = client.post(f"/sessions/{sid}/filters", json={"field": "content", "value": "money"})
    fid = added.json()["filters"][0]["filter_id"]
    removed = client.delete(f"/sessions/{sid}/filters/{fid}")
    assert removed.json()["match_count"] == 5


def test_results_pagination(client):
    sid = _session(client)["session_id"]
    page = client.get(f"/sessions/{sid}/results", params={"offset": 0, "limit": 2}).json()
    assert page["total"] == 5
    assert len(page["records"]) == 2
    rest = client.get(f"/sessions/{sid}/results", params={"offset": 4, "limit": 2}).json()
    assert len(rest["records"]) == 1


def test_results_ordering_newest_first_undated_last(client):
    sid = _session(client)["session_id"]
    page = client.get(f"/sessions/{sid}/results", params={"limit": 50}).json()
    ids = [r["doc_id"] for r in page["records"]]
    assert ids == ["d4", "d3", "d2", "d1", "d5"]


def test_bad_pagination_400(client):
    sid = _session(client)["session_id"]
    assert client.get(f"/sessions/{sid}/results", params={"limit": 0}).status_code == 400


def test_entities_with_tags_and_distribution(client):
    sid = _session(client)["session_id"]
    client.post(f"/sessions/{sid}/filters", json={"field": "content", "value": "money"})
    assign = client.post("/tags", json={"term": "transfer", "tag": "suspicious", "session_id": sid})
    assert assign.status_code == 200
    assert assign.json() == {"term": "transfer", "tags": ["suspicious"]}

    entities = client.get(f"/sessions/{sid}/entities", params={"k": 10}).json()["entities"]
    by_term = {e["term"]: e for e in entities}
    assert "transfer" in by_term
    assert by_term["transfer"]["tags"] == ["suspicious"]

    dist = client.get("/tags/distribution").json()
    assert dist == {"tags": [{"tag": "suspicious", "count": 1}]}

    # the assignment went into the session's action log
    actions = client.get(f"/sessions/{sid}/actions").text
    kinds = [json.loads(line)["kind"] for line in actions.splitlines()[1:]]
    assert kinds == ["load_dataset", "add_filter", "assign_tag"]


def test_tag_without_session(client):
    response = client.post("/tags", json={"term": "urgent", "tag": "hot"})
    assert response.status_code == 200
    assert response.json()["tags"] == ["hot"]


def test_empty_tag_label_400(client):
    response = client.post("/tags", json={"term": "urgent", "tag": "  "})
    assert response.status_code == 400
    assert response.json()["code"] == "EmptyLabel"


def test_graph_remove_and_undo(client):
    sid = _session(client)["session_id"]
    before = client.get(f"/sessions/{sid}/graph").json()
    target = before["nodes"][0]["address"]
    removed = client.post(
        f"/sessions/{sid}/graph/remove", json={"kind": "node", "payload": {"address": target}}
    ).json()
    assert all(n["address"] != target for n in removed["nodes"])
    assert removed["undo_depth"] == 1
    restored = client.post(f"/sessions/{sid}/graph/undo").json()
    assert restored == before


def test_graph_remove_unknown_404(client):
    sid = _session(client)["session_id"]
    response = client.post(
        f"/sessions/{sid}/graph/remove", json={"kind": "node", "payload": {"address": "ghost@x.com"}}
    )
    assert response.status_code == 404
    assert response.json()["code"] == "UnknownNode"


def test_graph_undo_empty_422(client):
    sid = _session(client)["session_id"]
    response = client.post(f"/sessions/{sid}/graph/undo")
    assert response.status_code == 422
    assert response.json()["code"] == "EmptyUndoStack"


def test_cluster_flow(client):
    sid = _session(client)["session_id"]
    before = client.get(f"/sessions/{sid}/cluster").json()
    assert before["clustered"] is False
    assert len(before["doc_ids"]) == 5

    run = client.post(f"/sessions/{sid}/cluster", json={"k": 2, "seed": 3})
    assert run.status_code == 200
    summary = run.json()
    assert summary["clustered"] is True and summary["k"] == 2

    sizes = 0
    for cluster in summary["clusters"]:
        ms = client.get(f"/sessions/{sid}/cluster/{cluster['index']}/members").json()
        assert ms["head"] == cluster["head"]
        sizes += len(ms["members"])
    assert sizes == 5


def test_cluster_invalid_k_422(client):
    sid = _session(client)["session_id"]
    response = client.post(f"/sessions/{sid}/cluster", json={"k": 99})
    assert response.status_code == 422
    assert response.json()["code"] == "InvalidK"


def test_cluster_cap_422(tmp_path, five_docs):
    app = create_app(ServiceConfig(data_dir=str(tmp_path / "capped"), cluster_doc_cap=2))
    handle = seed_dataset(app.state.mailscope.store, five_docs)
    with TestClient(app) as client:
        sid = client.post("/sessions", json={"dataset_id": handle.dataset_id}).json()["session_id"]
        response = client.post(f"/sessions/{sid}/cluster", json={"k": 2})
        assert response.status_code == 422
        assert response.json()["code"] == "ClusterCapExceeded"


def test_actions_download_fresh_session(client):
    sid = _session(client)["session_id"]
    text = client.get(f"/sessions/{sid}/actions").text
    lines = text.strip().splitlines()
    assert json.loads(lines[0]) == {"version": 1}
    assert len(lines) == 2
    assert json.loads(lines[1])["kind"] == "load_dataset"


def test_repeated_reads_byte_identical(client):
    sid = _session(client)["session_id"]
    first = client.get(f"/sessions/{sid}/correspondents")
    second = client.get(f"/sessions/{sid}/correspondents")
    assert first.content == second.content


def test_session_survives_restart(tmp_path, five_docs):
    config = ServiceConfig(data_dir=str(tmp_path / "data"))
    app = create_app(config)
    handle = seed_dataset(app.state.mailscope.store, five_docs)
    with TestClient(app) as client:
        sid = client.post("/sessions", json={"dataset_id": handle.dataset_id}).json()["session_id"]
        client.post(f"/sessions/{sid}/filters", json={"field": "content", "value": "money"})

    fresh = create_app(config)  # new process equivalent: same data dir
    with TestClient(fresh) as client:
        session = client.get(f"/sessions/{sid}").json()
        assert session["match_count"] == 2
        assert [f["value"] for f in session["filters"]] == ["money"]


def test_unknown_session_404(client):
    assert client.get("/sessions/ghost/results").status_code == 404


def test_validation_error_400(client):
    sid = _session(client)["session_id"]
    response = client.post(f"/sessions/{sid}/filters", json={"field": "content"})
    assert response.status_code == 400
    assert response.json()["code"] == "ValidationError"
