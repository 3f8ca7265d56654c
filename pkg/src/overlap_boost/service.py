"""HTTP+JSON façade over interactive sessions.

Sessions are held in memory; actions within one session apply strictly
serially under its lock, and every response carries the session revision so
clients can detect and retry stale writes (rejected with 409).
"""

from __future__ import annotations

import threading
import uuid

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .dataset import DatasetError, load_csv
from .serialize import jsonable
from .session import Session, SessionError


class CreateSessionRequest(BaseModel):
    csv_text: str
    label_column: str = "class"
    normalize: bool = True
    seed: int = 0


class ActionRequest(BaseModel):
    type: str
    revision: int | None = None
    params: dict = {}


class SessionRegistry:
    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def create(self, raw, normalize: bool, seed: int) -> Session:
        sid = uuid.uuid4().hex[:12]
        session = Session(raw, normalize=normalize, seed=seed, session_id=sid)
        with self._registry_lock:
            self._sessions[sid] = session
            self._locks[sid] = threading.Lock()
        return session

    def add(self, session: Session) -> None:
        with self._registry_lock:
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()

    def get(self, sid: str) -> tuple[Session, threading.Lock]:
        with self._registry_lock:
            if sid not in self._sessions:
                raise KeyError(sid)
            return self._sessions[sid], self._locks[sid]


def create_app(registry: SessionRegistry | None = None) -> FastAPI:
    registry = registry or SessionRegistry()
    app = FastAPI(title="overlap-boost session service")
    app.state.registry = registry
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def _session(sid: str):
        try:
            return registry.get(sid)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown session {sid!r}") from None

    @app.post("/session")
    def create_session(req: CreateSessionRequest):
        try:
            raw = load_csv(req.csv_text.encode("utf-8"), req.label_column)
        except DatasetError as e:
            raise HTTPException(status_code=400, detail=str(e)) from None
        session = registry.create(raw, req.normalize, req.seed)
        return {"session_id": session.id, "revision": session.revision}

    @app.get("/session/{sid}/state")
    def get_state(sid: str):
        session, _ = _session(sid)
        return session.state_json()

    @app.get("/session/{sid}/data")
    def get_data(sid: str, normalized: bool | None = None):
        session, _ = _session(sid)
        use_norm = session.normalized if normalized is None else normalized
        if use_norm and not session.normalized:
            raise HTTPException(status_code=400, detail="session was created without normalization")
        d = session.working if use_norm else session.raw
        snap = session.snapshot
        return jsonable(
            {
                "revision": session.revision,
                "normalized": use_norm,
                "attributes": list(d.attributes),
                "case_ids": d.case_ids,
                "cases": d.cases,
                "labels": d.labels,
                "remaining_ids": sorted(snap.remaining_ids),
                "axis_order": list(snap.axis_order),
                "hidden_classes": sorted(snap.hidden_classes),
            }
        )

    @app.get("/session/{sid}/scores")
    def get_scores(sid: str):
        session, _ = _session(sid)
        snap = session.snapshot
        if snap.scorer is None or snap.scores is None:
            raise HTTPException(status_code=409, detail="no scorer set; apply a set_scorer action")
        return jsonable(
            {
                "revision": session.revision,
                "scorer": snap.scorer.to_json(),
                "scorer_identity": snap.scorer.identity,
                "threshold": snap.scorer.threshold,
                "case_ids": snap.scores.case_ids,
                "scores": snap.scores.values,
                "case_c": snap.interval.case_c if snap.interval else None,
                "case_d": snap.interval.case_d if snap.interval else None,
            }
        )

    @app.get("/session/{sid}/overlap")
    def get_overlap(sid: str):
        session, _ = _session(sid)
        snap = session.snapshot
        if snap.interval is None:
            raise HTTPException(status_code=409, detail="no overlap computed; apply set_scorer first")
        return jsonable(
            {
                "revision": session.revision,
                "scorer_identity": snap.scorer.identity,
                "interval": snap.interval.to_json(),
                "hyperblock": snap.hyperblock.to_json() if snap.hyperblock else None,
                "envelope": snap.envelope.to_json() if snap.envelope else None,
            }
        )

    @app.get("/session/{sid}/export")
    def export(sid: str, what: str = "decision_list"):
        session, _ = _session(sid)
        snap = session.snapshot
        if what == "decision_list":
            return {"revision": session.revision, "decision_list": session.decision_list().to_json()}
        if what == "rules_text":
            return {"revision": session.revision, "rules_text": session.decision_list().to_text()}
        if what == "action_log":
            return {"revision": session.revision, "actions": session.action_log}
        raise HTTPException(status_code=400, detail=f"unknown export {what!r}")

    @app.post("/session/{sid}/action")
    def post_action(sid: str, req: ActionRequest):
        session, lock = _session(sid)
        with lock:
            if req.revision is not None and req.revision != session.revision:
                raise HTTPException(
                    status_code=409,
                    detail=f"stale revision {req.revision}; session is at {session.revision}",
                )
            action = {"type": req.type, **req.params}
            try:
                diff = session.apply(action)
            except (SessionError, DatasetError, ValueError) as e:
                raise HTTPException(status_code=422, detail=str(e)) from None
        return {"diff": diff, "revision": session.revision}

    return app
