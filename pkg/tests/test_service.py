import pytest
from fastapi.testclient import TestClient

from conftest import IRIS_CSV
from overlap_boost.service import create_app


@pytest.fixture()
def client():
    return TestClient(create_app())


@pytest.fixture()
def sid(client):
    r = client.post(
        "/session",
        json={"csv_text": IRIS_CSV.read_text(), "label_column": "class", "normalize": True},
    )
    assert r.status_code == 200
    return r.json()["session_id"]


def post_action(client, sid, action_type, revision=None, **params):
    return client.post(
        f"/session/{sid}/action",
        json={"type": action_type, "revision": revision, "params": params},
    )


class TestSessionLifecycle:
    def test_create_and_state(self, client, sid):
        r = client.get(f"/session/{sid}/state")
        assert r.status_code == 200
        state = r.json()
        assert state["revision"] == 0
        assert state["n_cases"] == 150
        assert len(state["remaining_ids"]) == 150

    def test_unknown_session_404(self, client):
        assert client.get("/session/nope/state").status_code == 404

    def test_bad_csv_400(self, client):
        r = client.post("/session", json={"csv_text": "a,b\n1,x\n", "label_column": "class"})
        assert r.status_code == 400

    def test_data_endpoint_both_forms(self, client, sid):
        norm = client.get(f"/session/{sid}/data", params={"normalized": True}).json()
        raw = client.get(f"/session/{sid}/data", params={"normalized": False}).json()
        assert len(norm["cases"]) == len(raw["cases"]) == 150
        assert max(max(row) for row in norm["cases"]) <= 1.0
        assert max(max(row) for row in raw["cases"]) > 1.0
        assert norm["attributes"] == raw["attributes"]


class TestActions:
    def test_mark_rectangle_roundtrip_exact(self, client, sid):
        r = post_action(
            client, sid, "mark_rectangle",
            ranges={"petal.width": [0.75, 1.0]}, label="Virginica",
        )
        assert r.status_code == 200
        diff = r.json()["diff"]
        rule = diff["rules_added"][0]
        # the served bounds echo the marked bounds exactly, digit for digit
        assert rule["lo"] == 0.75 and rule["hi"] == 1.0
        assert len(diff["cases_removed"]) == 34
        state = client.get(f"/session/{sid}/state").json()
        assert len(state["remaining_ids"]) == 116

    def test_impure_rectangle_422_names_cases(self, client, sid):
        r = post_action(
            client, sid, "mark_rectangle",
            ranges={"petal.width": [0.0, 1.0]}, label="Virginica",
        )
        assert r.status_code == 422
        assert "offending case ids" in r.json()["detail"]

    def test_stale_revision_409(self, client, sid):
        r = post_action(
            client, sid, "mark_rectangle", revision=0,
            ranges={"petal.width": [0.75, 1.0]}, label="Virginica",
        )
        assert r.status_code == 200
        r = post_action(
            client, sid, "mark_rectangle", revision=0,
            ranges={"petal.width": [0.0, 0.21]}, label="Setosa",
        )
        assert r.status_code == 409

    def test_revision_monotone_across_reads_and_writes(self, client, sid):
        revs = [client.get(f"/session/{sid}/state").json()["revision"]]
        post_action(client, sid, "hide_class", label="Setosa")
        revs.append(client.get(f"/session/{sid}/state").json()["revision"])
        post_action(client, sid, "undo")
        revs.append(client.get(f"/session/{sid}/state").json()["revision"])
        assert revs == sorted(revs) and len(set(revs)) == 3


class TestScorerEndpoints:
    def test_scores_require_scorer(self, client, sid):
        assert client.get(f"/session/{sid}/scores").status_code == 409

    def test_scores_and_overlap(self, client, sid):
        r = post_action(client, sid, "set_scorer", top="Versicolor", bottom="Virginica")
        assert r.status_code == 200
        scores = client.get(f"/session/{sid}/scores").json()
        assert len(scores["scores"]) == 100  # the two-class task
        assert scores["case_c"] is not None and scores["case_d"] is not None
        overlap = client.get(f"/session/{sid}/overlap").json()
        assert overlap["interval"]["a"] <= scores["threshold"] <= overlap["interval"]["b"]
        assert overlap["hyperblock"] is not None
        assert overlap["envelope"] is not None
        assert overlap["scorer_identity"] == scores["scorer_identity"]

    def test_export_forms(self, client, sid):
        post_action(
            client, sid, "mark_rectangle",
            ranges={"petal.width": [0.75, 1.0]}, label="Virginica",
        )
        dl = client.get(f"/session/{sid}/export", params={"what": "decision_list"}).json()
        assert dl["decision_list"]["rules"][0]["coverage"] == 34
        text = client.get(f"/session/{sid}/export", params={"what": "rules_text"}).json()
        assert "petal.width" in text["rules_text"]
        log = client.get(f"/session/{sid}/export", params={"what": "action_log"}).json()
        assert log["actions"][0]["type"] == "mark_rectangle"
        assert client.get(f"/session/{sid}/export", params={"what": "nope"}).status_code == 400
