"""HTTP/JSON session service.

Hosts in-memory sessions behind four endpoints:

    POST /sessions                    -> create + onboarding reply (201)
    POST /sessions/{id}/utterances    -> run one turn (200)
    GET  /sessions/{id}               -> read-only snapshot
    GET  /sessions/{id}/metrics       -> interaction metrics

Turns for one session are serialized by a per-session lock; metrics reads
see a consistent pre- or post-turn snapshot. Idle sessions are evicted
lazily.
"""
from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from explora.config import ServiceConfig, build_manager
from explora.dialogue import DialogueManager, Reply
from explora.session import (
    Ended,
    Session,
    metrics_of,
    metrics_to_json,
    new_session,
    screen_to_json,
    session_to_json,
    state_to_json,
)


class UtteranceBody(BaseModel):
    text: str = ""


@dataclass
class _Entry:
    session: Session
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_active: float = field(default_factory=time.time)


class SessionStore:
    """In-memory session map with a cap and lazy idle eviction."""

    def __init__(self, cap: int = 1024, idle_minutes: float = 30.0):
        self.cap = cap
        self.idle_seconds = idle_minutes * 60.0
        self._entries: dict[str, _Entry] = {}
        self._lock = threading.Lock()

    def _evict_idle(self) -> None:
        cutoff = time.time() - self.idle_seconds
        for sid in [s for s, e in self._entries.items() if e.last_active < cutoff]:
            del self._entries[sid]

    def create(self) -> Session:
        with self._lock:
            self._evict_idle()
            if len(self._entries) >= self.cap:
                raise HTTPException(status_code=503, detail="session store full")
            session = new_session()
            self._entries[session.id] = _Entry(session=session)
            return session

    def get(self, session_id: str) -> _Entry:
        with self._lock:
            entry = self._entries.get(session_id)
            if entry is None:
                raise HTTPException(status_code=404, detail="unknown session")
            entry.last_active = time.time()
            return entry

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


def _reply_json(reply: Reply) -> dict:
    return {
        "speech": reply.speech,
        "screen": screen_to_json(reply.screen),
        "turn_outcome": reply.turn_outcome,
    }


class TurnLog:
    """Line-delimited JSON log of handled turns, for post-hoc analysis."""

    def __init__(self, path):
        self.path = path
        self._lock = threading.Lock()

    def write(self, record: dict) -> None:
        if self.path is None:
            return
        line = json.dumps(record, ensure_ascii=False)
        with self._lock, open(self.path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")


def create_app(
    cfg: ServiceConfig, manager: DialogueManager | None = None
) -> FastAPI:
    """Build the service app; a prebuilt manager can be injected for tests."""
    manager = manager or build_manager(cfg)
    store = SessionStore(cap=cfg.session_cap, idle_minutes=cfg.idle_minutes)
    log = TurnLog(cfg.log_path)

    app = FastAPI(title="explora", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store
    app.state.manager = manager

    @app.post("/sessions", status_code=201)
    def create_session() -> dict:
        session = store.create()
        reply = manager.start(session)
        return {"session_id": session.id, "reply": _reply_json(reply)}

    @app.post("/sessions/{session_id}/utterances")
    def post_utterance(session_id: str, body: UtteranceBody) -> dict:
        text = body.text.strip()
        if not text:
            raise HTTPException(status_code=400, detail="empty text")
        entry = store.get(session_id)
        with entry.lock:
            if isinstance(entry.session.state, Ended):
                raise HTTPException(status_code=409, detail="session has ended")
            reply = manager.handle(entry.session, text)
            turn = entry.session.turns[-1]
            log.write(
                {
                    "at": turn.at,
                    "session_id": session_id,
                    "text": turn.user_text,
                    "intent": turn.intent,
                    "outcome": turn.outcome,
                    "latency_ms": turn.latency,
                    "state": state_to_json(entry.session.state),
                }
            )
            return {
                "reply": _reply_json(reply),
                "state": state_to_json(entry.session.state),
                "screen": screen_to_json(reply.screen),
                "metrics": metrics_to_json(metrics_of(entry.session)),
            }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        entry = store.get(session_id)
        with entry.lock:
            return {
                "session": session_to_json(entry.session),
                "state": state_to_json(entry.session.state),
                "metrics": metrics_to_json(metrics_of(entry.session)),
            }

    @app.get("/sessions/{session_id}/metrics")
    def get_metrics(session_id: str) -> dict:
        entry = store.get(session_id)
        with entry.lock:
            return metrics_to_json(metrics_of(entry.session))

    return app
