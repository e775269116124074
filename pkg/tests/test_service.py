"""HTTP service: routing, pending pairs, rebuild, config parsing."""

import json

import pytest
from fastapi.testclient import TestClient

from agriqa.retrieval import load_index
from agriqa.service import (QaEngine, ServiceError, create_app,
                            load_service_config, merge_pending,
                            pending_path_for)
from agriqa.weather import FailingWeatherProvider

FIG_ANSWER = "wheat market rate – 1800 – – 2200 rups pq"


@pytest.fixture
def engine(service_env) -> QaEngine:
    return QaEngine(load_service_config(service_env["config"]))


@pytest.fixture
def client(engine) -> TestClient:
    return TestClient(create_app(engine))


def ask(client, question, **kw):
    response = client.post("/v1/ask", json={"question": question, **kw})
    assert response.status_code == 200
    return response.json()


def test_health_reports_index_state(client, engine):
    body = client.get("/v1/health").json()
    assert body["status"] == "ok"
    assert body["entries"] == len(engine.index)
    assert body["dim"] == 75
    assert body["threshold"] == pytest.approx(0.25)
    assert body["similarity_floor"] == pytest.approx(0.70)
    assert body["pending"] == 0
    assert body["fingerprint"] == engine.index.fingerprint


def test_ask_weather_routes_to_provider(client):
    body = ask(client, "what is the weather", state="punjab", district="ludhiana")
    assert body["source"] == "weather"
    assert body["answer"].startswith("Forecast for ludhiana, punjab")
    assert body["reason"] is None


def test_weather_check_runs_before_retrieval(client):
    # the token rule wins even when the rest of the question is indexed
    body = ask(client, "weather during wheat market rate")
    assert body["source"] == "weather"


def test_ask_weather_provider_failure_escalates(service_env):
    engine = QaEngine(load_service_config(service_env["config"]),
                      provider=FailingWeatherProvider())
    client = TestClient(create_app(engine))
    body = ask(client, "what is the weather")
    assert body["source"] == "escalate"
    assert body["reason"] == "weather_provider_failure"
    assert body["answer"] == ""


def test_ask_known_question_serves_stored_answer(client):
    body = ask(client, "market rate of wheat")
    assert body["source"] == "kb"
    assert body["answer"] == FIG_ANSWER
    assert body["matched_question"] == "wheat market rate"
    assert body["similarity"] >= 0.70
    assert body["answer_score"] > 0.25
    assert body["reason"] is None


def test_ask_alternatives_exclude_the_winner(client):
    body = ask(client, "market rate of wheat", top_k=5)
    alternatives = body["alternatives"]
    assert len(alternatives) == 4
    assert body["matched_question"] not in [a["matched_question"]
                                            for a in alternatives]
    sims = [a["similarity"] for a in alternatives]
    assert sims == sorted(sims, reverse=True)
    assert all(s <= body["similarity"] for s in sims)


def test_ask_gibberish_escalates(client):
    body = ask(client, "qqqqqq zzzzzz")
    assert body["source"] == "escalate"
    assert body["reason"] == "unembeddable"
    assert body["answer"] == ""


def test_ask_escalates_below_similarity_floor(service_env):
    config = load_service_config(service_env["config"])
    config.similarity_floor = 1.01  # unreachable: cosine is clamped to 1
    client = TestClient(create_app(QaEngine(config)))
    body = ask(client, "market rate of wheat")
    assert body["source"] == "escalate"
    assert body["reason"] == "low_confidence"


def test_ask_escalates_below_metric_threshold(service_env):
    config = load_service_config(service_env["config"])
    config.threshold = 2.0  # the lesk score cannot reach it
    client = TestClient(create_app(QaEngine(config)))
    body = ask(client, "market rate of wheat")
    assert body["source"] == "escalate"
    assert body["reason"] == "low_confidence"


def test_ask_validation_errors(client):
    assert client.post("/v1/ask", json={"question": "   "}).status_code == 422
    assert client.post("/v1/ask", json={}).status_code == 422
    assert client.post("/v1/ask", json={"question": "q", "top_k": 0}).status_code == 422
    assert client.post("/v1/ask", json={"question": "q", "top_k": 99}).status_code == 422


def test_pairs_dedup_by_normalized_question(client):
    first = client.post("/v1/pairs", json={
        "question": "how to store onion after harvest",
        "answer": "cure bulbs in shade for a week"}).json()
    assert first == {"status": "ok", "pending": 1}
    duplicate = client.post("/v1/pairs", json={
        "question": "How to store ONION after harvest?",
        "answer": " cure bulbs in shade for a week "}).json()
    assert duplicate == {"status": "duplicate", "pending": 1}
    distinct = client.post("/v1/pairs", json={
        "question": "how to store onion after harvest",
        "answer": "use ventilated crates"}).json()
    assert distinct == {"status": "ok", "pending": 2}


def test_pairs_validation(client):
    assert client.post("/v1/pairs", json={"question": "q"}).status_code == 422
    assert client.post("/v1/pairs",
                       json={"question": "q", "answer": " "}).status_code == 422


def test_pending_survives_until_rebuild(client, engine):
    question = "how deep to sow barley seed in loam"
    client.post("/v1/pairs", json={"question": question,
                                   "answer": "sow 4cm deep"})
    # the index must not change before an operator rebuild
    before = ask(client, question)
    assert before["matched_question"] != question
    assert client.get("/v1/health").json()["pending"] == 1

    summary = engine.rebuild()
    assert summary["applied"] == 1
    after = ask(client, question)
    assert after["source"] == "kb"
    assert after["matched_question"] == question
    assert after["answer"] == "sow 4cm deep"
    assert client.get("/v1/health").json()["pending"] == 0
    assert client.get("/v1/health").json()["entries"] == summary["entries"]


def test_rebuild_persists_index_and_archives_pending(client, engine, service_env):
    client.post("/v1/pairs", json={"question": "mulching for young mango trees",
                                   "answer": "use dry straw mulch"})
    entries_before = len(engine.index)
    summary = engine.rebuild()
    assert summary["entries"] == entries_before + 1

    reloaded = load_index(service_env["index"])
    assert len(reloaded) == entries_before + 1
    pending = pending_path_for(service_env["index"])
    assert not pending.exists()
    archived = pending.with_suffix(".applied.jsonl")
    assert archived.exists()
    assert json.loads(archived.read_text().splitlines()[0])["answer"] \
        == "use dry straw mulch"


def test_rebuild_without_pending_is_a_no_op(engine):
    before = engine.index.fingerprint
    summary = engine.rebuild()
    assert summary["applied"] == 0
    assert engine.index.fingerprint == before


def test_merge_pending_attaches_to_existing_entry(engine):
    entries = engine.index.entries
    target = entries[0]
    pending = [{"question": target.canonical_question, "answer": "brand new answer"}]
    merged = merge_pending(entries, pending, engine.normalizer)
    assert len(merged) == len(entries)
    updated = next(e for e in merged if e.entry_id == target.entry_id)
    assert "brand new answer" in updated.answers


def test_merge_pending_mints_fresh_id(engine):
    entries = engine.index.entries
    pending = [{"question": "drip irrigation spacing for pomegranate",
                "answer": "place drippers 50cm apart"}]
    merged = merge_pending(entries, pending, engine.normalizer)
    assert len(merged) == len(entries) + 1
    new = merged[-1]
    assert new.entry_id == max(e.entry_id for e in entries) + 1
    assert new.answers == ["place drippers 50cm apart"]


def test_config_missing_key_rejected(tmp_path):
    path = tmp_path / "bad.conf"
    path.write_text("index_path=idx\nthreshold=0.25\n", encoding="utf-8")
    with pytest.raises(ServiceError, match="model_path"):
        load_service_config(path)


def test_config_relative_paths_resolve_against_file(tmp_path):
    path = tmp_path / "svc.conf"
    path.write_text("index_path=idx\nmodel_path=model\ngloss_path=g.tsv\n"
                    "crops_path=c.txt\nsynonyms_path=s.tsv\n"
                    "stopwords_path=w.txt\nthreshold=0.3\n", encoding="utf-8")
    config = load_service_config(path)
    assert config.index_path == tmp_path / "idx"
    assert config.model_path == tmp_path / "model"
    assert config.threshold == pytest.approx(0.3)
    assert config.similarity_floor == pytest.approx(0.70)  # default
    assert config.port == 8000


def test_config_rejects_malformed_line(tmp_path):
    path = tmp_path / "svc.conf"
    path.write_text("just some words\n", encoding="utf-8")
    with pytest.raises(ServiceError):
        load_service_config(path)


def test_ui_mount_serves_static_files(engine, tmp_path):
    ui = tmp_path / "dist"
    ui.mkdir()
    (ui / "index.html").write_text("<!doctype html><title>chat</title>",
                                   encoding="utf-8")
    client = TestClient(create_app(engine, ui_dir=ui))
    response = client.get("/ui/")
    assert response.status_code == 200
    assert "chat" in response.text
    root = client.get("/", follow_redirects=False)
    assert root.status_code in (302, 307)
    assert root.headers["location"].rstrip("/").endswith("/ui")


def test_service_runs_without_ui(engine, tmp_path, monkeypatch):
    # no build output anywhere in sight: the API must stand alone
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("AGRIQA_UI_DIR", raising=False)
    client = TestClient(create_app(engine))
    assert client.get("/ui/").status_code == 404
    assert client.get("/v1/health").status_code == 200
