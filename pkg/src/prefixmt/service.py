"""Correction service: engine registry, session store, HTTP endpoints.

Endpoints (JSON in/out):
  POST /api/sessions                      {engine, source_text} -> 201
  POST /api/sessions/{id}/corrections     {position, word}      -> 200
  POST /api/sessions/{id}/accept                                -> 200
  GET  /api/sessions/{id}                                       -> 200
  GET  /api/engines                                             -> 200
Static UI files are served from / when a static directory is configured.
"""

from __future__ import annotations

import hashlib
import json
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .imt import (
    ImtSession,
    SessionError,
    SuffixGenerator,
    accept,
    apply_correction,
    start_session,
)
from .text import detokenize, tokenize


class EngineRegistry:
    """Named suffix generators with digests of their model files."""

    def __init__(self):
        self._engines: dict[str, tuple[SuffixGenerator, str]] = {}

    def register(self, name: str, generator: SuffixGenerator, digest: str = "") -> None:
        if name in self._engines:
            raise ValueError(f"engine name already registered: {name}")
        self._engines[name] = (generator, digest)

    def get(self, name: str) -> SuffixGenerator:
        if name not in self._engines:
            raise KeyError(name)
        return self._engines[name][0]

    def digest(self, name: str) -> str:
        return self._engines[name][1]

    def names(self) -> list[str]:
        return sorted(self._engines)

    def __contains__(self, name: str) -> bool:
        return name in self._engines


def files_digest(paths: list[Path]) -> str:
    h = hashlib.sha256()
    for p in sorted(paths):
        h.update(p.name.encode("utf-8"))
        h.update(p.read_bytes())
    return h.hexdigest()


def load_engines(model_dir: str | Path) -> EngineRegistry:
    """Load every engine found under the model directory.

    ``smt/`` holds phrase_table.txt, lm.arpa, weights.tsv and config.json;
    ``neural/`` holds model.npz and config.json.
    """
    from .imt import NeuralTranslator, SmtTranslator
    from .neural.model import NeuralModel
    from .neural.search import BeamConfig
    from .smt.decoder import LogLinearWeights
    from .smt.lm import NGramLanguageModel
    from .smt.phrases import PhraseTable

    model_dir = Path(model_dir)
    registry = EngineRegistry()
    smt_dir = model_dir / "smt"
    if smt_dir.is_dir():
        files = [smt_dir / "phrase_table.txt", smt_dir / "lm.arpa", smt_dir / "weights.tsv"]
        for f in files:
            if not f.exists():
                raise FileNotFoundError(f"missing SMT model file: {f}")
        cfg = {}
        if (smt_dir / "config.json").exists():
            cfg = json.loads((smt_dir / "config.json").read_text(encoding="utf-8"))
        engine = SmtTranslator(
            PhraseTable.load(files[0]),
            NGramLanguageModel.load_arpa(files[1]),
            LogLinearWeights.load(files[2]),
            beam=cfg.get("beam", 16),
            distortion_limit=cfg.get("distortion_limit", 0),
        )
        registry.register("smt", engine, files_digest(files))
    neural_dir = model_dir / "neural"
    if neural_dir.is_dir():
        ckpt = neural_dir / "model.npz"
        if not ckpt.exists():
            raise FileNotFoundError(f"missing neural model file: {ckpt}")
        cfg = {}
        if (neural_dir / "config.json").exists():
            cfg = json.loads((neural_dir / "config.json").read_text(encoding="utf-8"))
        engine = NeuralTranslator(
            NeuralModel.load(ckpt),
            BeamConfig(
                beam_size=cfg.get("beam_size", 6),
                max_output_len=cfg.get("max_output_len", 80),
            ),
        )
        registry.register("neural", engine, files_digest([ckpt]))
    return registry


class SessionStore:
    """In-memory sessions with monotone ids and an append-only journal."""

    def __init__(self, journal_path: str | Path | None = None):
        self.sessions: dict[int, ImtSession] = {}
        self.engine_of: dict[int, str] = {}
        self._locks: dict[int, threading.Lock] = {}
        self._id_lock = threading.Lock()
        self._next_id = 1
        self._journal_path = Path(journal_path) if journal_path else None

    def _journal(self, event: dict) -> None:
        if self._journal_path is not None:
            with self._id_lock:
                with self._journal_path.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps(event, ensure_ascii=False) + "\n")

    def create(self, engine_name: str, generator: SuffixGenerator, source_text: str) -> ImtSession:
        with self._id_lock:
            sid = self._next_id
            self._next_id += 1
            self._locks[sid] = threading.Lock()
        session = start_session(generator, tokenize(source_text), session_id=sid)
        self.sessions[sid] = session
        self.engine_of[sid] = engine_name
        self._journal({"event": "create", "id": sid, "engine": engine_name,
                       "source": source_text})
        return session

    def lock(self, sid: int) -> threading.Lock:
        return self._locks[sid]

    def correct(self, sid: int, position: int, word: str) -> ImtSession:
        session = self.sessions[sid]
        with self.lock(sid):
            apply_correction(session, position, word)
            self._journal({"event": "correct", "id": sid, "position": position, "word": word})
        return session

    def accept(self, sid: int):
        session = self.sessions[sid]
        with self.lock(sid):
            metrics = accept(session)
            self._journal({"event": "accept", "id": sid})
        return metrics


def replay_journal(path: str | Path, registry: EngineRegistry) -> SessionStore:
    """Rebuild a store by re-running journaled events against the engines.

    Engines are deterministic, so the rebuilt sessions match the original
    ones exactly; replaying a journal never appends to it.
    """
    store = SessionStore(journal_path=None)
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        event = json.loads(line)
        sid = event["id"]
        if event["event"] == "create":
            generator = registry.get(event["engine"])
            session = start_session(generator, tokenize(event["source"]), session_id=sid)
            store.sessions[sid] = session
            store.engine_of[sid] = event["engine"]
            store._locks[sid] = threading.Lock()
            store._next_id = max(store._next_id, sid + 1)
        elif event["event"] == "correct":
            apply_correction(store.sessions[sid], event["position"], event["word"])
        elif event["event"] == "accept":
            accept(store.sessions[sid])
    return store


def _session_payload(session: ImtSession) -> dict:
    return {
        "session_id": session.id,
        "hypothesis": detokenize(session.hypothesis),
        "tokens": list(session.hypothesis),
        "prefix_len": session.prefix_len,
        "word_strokes": session.word_strokes,
        "mouse_actions": session.mouse_actions,
        "status": session.status,
    }


_FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>prefixmt</title></head>
<body><h1>prefixmt correction service</h1>
<p>API is up. Build the frontend (frontend/README.md) to get the UI,
or point --static-dir at its dist/ directory.</p></body></html>
"""

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".ico": "image/x-icon",
    ".map": "application/json",
}


def make_handler(registry: EngineRegistry, store: SessionStore,
                 static_dir: str | Path | None = None):
    static_root = Path(static_dir).resolve() if static_dir else None

    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send_json(self, status: int, payload: dict) -> None:
            body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _read_json(self) -> dict | None:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b"{}"
            try:
                return json.loads(raw.decode("utf-8"))
            except (json.JSONDecodeError, UnicodeDecodeError):
                self._send_json(400, {"error": "invalid JSON body"})
                return None

        def do_POST(self):
            if self.path == "/api/sessions":
                return self._create_session()
            m = re.fullmatch(r"/api/sessions/(\d+)/corrections", self.path)
            if m:
                return self._correct(int(m.group(1)))
            m = re.fullmatch(r"/api/sessions/(\d+)/accept", self.path)
            if m:
                return self._accept(int(m.group(1)))
            self._send_json(404, {"error": f"no such endpoint: {self.path}"})

        def do_GET(self):
            m = re.fullmatch(r"/api/sessions/(\d+)", self.path)
            if m:
                sid = int(m.group(1))
                if sid not in store.sessions:
                    return self._send_json(404, {"error": f"unknown session {sid}"})
                payload = _session_payload(store.sessions[sid])
                payload["engine"] = store.engine_of[sid]
                return self._send_json(200, payload)
            if self.path == "/api/engines":
                return self._send_json(
                    200,
                    {"engines": [
                        {"name": n, "digest": registry.digest(n)} for n in registry.names()
                    ]},
                )
            return self._static()

        def _create_session(self):
            body = self._read_json()
            if body is None:
                return
            engine = body.get("engine", "")
            source_text = body.get("source_text", "")
            if engine not in registry:
                return self._send_json(404, {"error": f"unknown engine {engine!r}"})
            if not source_text.strip():
                return self._send_json(422, {"error": "source_text must be non-empty"})
            session = store.create(engine, registry.get(engine), source_text)
            payload = _session_payload(session)
            self._send_json(201, payload)

        def _correct(self, sid: int):
            body = self._read_json()
            if body is None:
                return
            if sid not in store.sessions:
                return self._send_json(404, {"error": f"unknown session {sid}"})
            if store.sessions[sid].status != "active":
                return self._send_json(409, {"error": "session already accepted"})
            position, word = body.get("position"), body.get("word")
            if not isinstance(position, int) or not isinstance(word, str):
                return self._send_json(422, {"error": "position (int) and word (str) required"})
            try:
                session = store.correct(sid, position, word)
            except SessionError as exc:
                status = 409 if "accepted" in str(exc) else 422
                return self._send_json(status, {"error": str(exc)})
            self._send_json(200, _session_payload(session))

        def _accept(self, sid: int):
            if sid not in store.sessions:
                return self._send_json(404, {"error": f"unknown session {sid}"})
            if store.sessions[sid].status != "active":
                return self._send_json(409, {"error": "session already accepted"})
            try:
                metrics = store.accept(sid)
            except SessionError as exc:
                return self._send_json(409, {"error": str(exc)})
            self._send_json(
                200,
                {
                    "final_text": detokenize(metrics.final_hypothesis),
                    "metrics": {
                        "word_strokes": metrics.word_strokes,
                        "mouse_actions": metrics.mouse_actions,
                        "iterations": metrics.iterations,
                    },
                },
            )

        def _static(self):
            path = self.path.split("?")[0]
            if path == "/":
                path = "/index.html"
            if static_root is not None:
                target = (static_root / path.lstrip("/")).resolve()
                if static_root in target.parents or target == static_root:
                    if target.is_file():
                        body = target.read_bytes()
                        ctype = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
                        self.send_response(200)
                        self.send_header("Content-Type", ctype)
                        self.send_header("Content-Length", str(len(body)))
                        self.end_headers()
                        self.wfile.write(body)
                        return
            if path == "/index.html":
                body = _FALLBACK_PAGE.encode("utf-8")
                self.send_response(200)
                self.send_header("Content-Type", "text/html; charset=utf-8")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)
                return
            self._send_json(404, {"error": f"not found: {path}"})

    return Handler


def make_server(
    registry: EngineRegistry,
    store: SessionStore,
    port: int = 8099,
    static_dir: str | Path | None = None,
) -> ThreadingHTTPServer:
    handler = make_handler(registry, store, static_dir)
    return ThreadingHTTPServer(("127.0.0.1", port), handler)
