"""HTTP correction service spun up in-process on an ephemeral port."""

import json
import threading
import urllib.error
import urllib.request

import pytest

from prefixmt.imt import ScriptedGenerator
from prefixmt.service import (
    EngineRegistry,
    SessionStore,
    make_server,
    replay_journal,
)
from prefixmt.text import tokenize

SOURCE = "durmamos por aora entrambos, y despues, Dios dixo lo que sera."
IT0 = "Durmamos por ahora ambos, y después Dios dirá."
IT1 = "Durmamos de momento ambos, y después Dios dirá."
IT2 = "Durmamos de momento los dos, y después Dios dirá."


def scripted_engine():
    it0, it1, it2 = tokenize(IT0), tokenize(IT1), tokenize(IT2)
    return ScriptedGenerator({(): it0, it1[:2]: it1[2:], it2[:4]: it2[4:]})


@pytest.fixture()
def server(tmp_path):
    registry = EngineRegistry()
    registry.register("smt", scripted_engine(), digest="stub")
    store = SessionStore(journal_path=tmp_path / "journal.jsonl")
    srv = make_server(registry, store, port=0)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{srv.server_address[1]}"
    yield base, registry, store, tmp_path / "journal.jsonl"
    srv.shutdown()
    srv.server_close()


def call(base, method, path, payload=None):
    data = json.dumps(payload).encode("utf-8") if payload is not None else None
    req = urllib.request.Request(base + path, data=data, method=method)
    if data:
        req.add_header("Content-Type", "application/json")
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read().decode("utf-8"))
    except urllib.error.HTTPError as err:
        body = err.read().decode("utf-8")
        return err.code, json.loads(body) if body else {}


class TestSessionEndpoints:
    def test_create_correct_accept_flow(self, server):
        base, _, _, _ = server
        status, created = call(base, "POST", "/api/sessions",
                               {"engine": "smt", "source_text": SOURCE})
        assert status == 201
        assert created["hypothesis"] == IT0
        assert created["prefix_len"] == 0
        sid = created["session_id"]
        assert sid >= 1

        status, after1 = call(base, "POST", f"/api/sessions/{sid}/corrections",
                              {"position": 2, "word": "de"})
        assert status == 200
        assert after1["hypothesis"] == IT1
        assert after1["prefix_len"] == 2
        assert after1["word_strokes"] == 1
        assert after1["mouse_actions"] == 1

        status, after2 = call(base, "POST", f"/api/sessions/{sid}/corrections",
                              {"position": 4, "word": "los"})
        assert status == 200
        assert after2["hypothesis"] == IT2

        status, final = call(base, "POST", f"/api/sessions/{sid}/accept")
        assert status == 200
        assert final["final_text"] == IT2
        assert final["metrics"] == {
            "word_strokes": 2, "mouse_actions": 3, "iterations": 2,
        }

    def test_unknown_engine_404(self, server):
        base, _, _, _ = server
        status, body = call(base, "POST", "/api/sessions",
                            {"engine": "nope", "source_text": "x"})
        assert status == 404

    def test_empty_source_422(self, server):
        base, _, _, _ = server
        status, _ = call(base, "POST", "/api/sessions",
                         {"engine": "smt", "source_text": "   "})
        assert status == 422

    def test_unknown_session_404(self, server):
        base, _, _, _ = server
        status, _ = call(base, "POST", "/api/sessions/99/corrections",
                         {"position": 1, "word": "x"})
        assert status == 404
        status, _ = call(base, "GET", "/api/sessions/99")
        assert status == 404

    def test_position_zero_422(self, server):
        base, _, _, _ = server
        _, created = call(base, "POST", "/api/sessions",
                          {"engine": "smt", "source_text": SOURCE})
        sid = created["session_id"]
        status, _ = call(base, "POST", f"/api/sessions/{sid}/corrections",
                         {"position": 0, "word": "x"})
        assert status == 422

    def test_correct_after_accept_409(self, server):
        base, _, _, _ = server
        _, created = call(base, "POST", "/api/sessions",
                          {"engine": "smt", "source_text": SOURCE})
        sid = created["session_id"]
        call(base, "POST", f"/api/sessions/{sid}/accept")
        status, _ = call(base, "POST", f"/api/sessions/{sid}/corrections",
                         {"position": 2, "word": "de"})
        assert status == 409

    def test_double_accept_409(self, server):
        base, _, _, _ = server
        _, created = call(base, "POST", "/api/sessions",
                          {"engine": "smt", "source_text": SOURCE})
        sid = created["session_id"]
        assert call(base, "POST", f"/api/sessions/{sid}/accept")[0] == 200
        assert call(base, "POST", f"/api/sessions/{sid}/accept")[0] == 409

    def test_get_session_state(self, server):
        base, _, _, _ = server
        _, created = call(base, "POST", "/api/sessions",
                          {"engine": "smt", "source_text": SOURCE})
        sid = created["session_id"]
        status, state = call(base, "GET", f"/api/sessions/{sid}")
        assert status == 200
        assert state["engine"] == "smt"
        assert state["status"] == "active"
        assert state["tokens"][0] == "Durmamos"

    def test_engines_endpoint(self, server):
        base, _, _, _ = server
        status, body = call(base, "GET", "/api/engines")
        assert status == 200
        assert body["engines"] == [{"name": "smt", "digest": "stub"}]

    def test_ids_monotone(self, server):
        base, _, _, _ = server
        ids = []
        for _ in range(3):
            _, created = call(base, "POST", "/api/sessions",
                              {"engine": "smt", "source_text": SOURCE})
            ids.append(created["session_id"])
        assert ids == sorted(ids)
        assert len(set(ids)) == 3

    def test_static_fallback_page(self, server):
        base, _, _, _ = server
        req = urllib.request.Request(base + "/")
        with urllib.request.urlopen(req) as resp:
            assert resp.status == 200
            assert b"prefixmt" in resp.read()


class TestJournal:
    def test_replay_reconstructs_sessions(self, server):
        base, registry, store, journal = server
        _, created = call(base, "POST", "/api/sessions",
                          {"engine": "smt", "source_text": SOURCE})
        sid = created["session_id"]
        call(base, "POST", f"/api/sessions/{sid}/corrections", {"position": 2, "word": "de"})
        call(base, "POST", f"/api/sessions/{sid}/corrections", {"position": 4, "word": "los"})
        call(base, "POST", f"/api/sessions/{sid}/accept")

        replayed = replay_journal(journal, registry)
        original = store.sessions[sid]
        copy = replayed.sessions[sid]
        assert copy.hypothesis == original.hypothesis
        assert copy.word_strokes == original.word_strokes
        assert copy.mouse_actions == original.mouse_actions
        assert copy.status == original.status

    def test_replay_idempotent(self, server):
        base, registry, _, journal = server
        _, created = call(base, "POST", "/api/sessions",
                          {"engine": "smt", "source_text": SOURCE})
        sid = created["session_id"]
        call(base, "POST", f"/api/sessions/{sid}/corrections", {"position": 2, "word": "de"})
        s1 = replay_journal(journal, registry)
        s2 = replay_journal(journal, registry)
        assert s1.sessions[sid].hypothesis == s2.sessions[sid].hypothesis
        assert s1.sessions[sid].word_strokes == s2.sessions[sid].word_strokes


class TestConcurrency:
    def test_conflicting_corrections_serialized(self, server):
        """Two clients correcting the same position: one wins, one 422s."""
        base, _, _, _ = server
        _, created = call(base, "POST", "/api/sessions",
                          {"engine": "smt", "source_text": SOURCE})
        sid = created["session_id"]
        results = []

        def worker():
            results.append(
                call(base, "POST", f"/api/sessions/{sid}/corrections",
                     {"position": 2, "word": "de"})
            )

        threads = [threading.Thread(target=worker) for _ in range(2)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        codes = sorted(status for status, _ in results)
        assert codes[0] == 200
        assert codes[1] in (409, 422)
