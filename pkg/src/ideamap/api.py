"""HTTP+JSON surface over sessions; field names here are the UI contract.

Errors are always {"error_code", "message"} with codes invalid_concept,
pending_batch, stale_batch, not_found, exhausted, plus invalid_edit for
rejected map edits (self-links, duplicates, disconnecting removals).
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .errors import (
    ContractViolationError,
    DisconnectError,
    DuplicateConceptError,
    DuplicateLinkError,
    ExhaustedSuggestionsError,
    IdeamapError,
    InvalidConceptError,
    NotFoundError,
    PendingBatchError,
    RootRemovalError,
    SelfLinkError,
    StaleBatchError,
)
from .graph import KnowledgeGraph
from .mindmap import Clock, utc_now
from .service import Session, create_session

_ERROR_CODES: list[tuple[type[Exception], str, int]] = [
    (InvalidConceptError, "invalid_concept", 422),
    (ContractViolationError, "invalid_concept", 422),
    (DuplicateConceptError, "invalid_concept", 422),
    (PendingBatchError, "pending_batch", 409),
    (StaleBatchError, "stale_batch", 409),
    (ExhaustedSuggestionsError, "exhausted", 409),
    (NotFoundError, "not_found", 404),
    (SelfLinkError, "invalid_edit", 422),
    (DuplicateLinkError, "invalid_edit", 422),
    (RootRemovalError, "invalid_edit", 422),
    (DisconnectError, "invalid_edit", 422),
]


def _error_response(exc: IdeamapError) -> JSONResponse:
    for klass, code, status in _ERROR_CODES:
        if isinstance(exc, klass):
            return JSONResponse({"error_code": code, "message": str(exc)},
                                status_code=status)
    return JSONResponse({"error_code": "internal", "message": str(exc)},
                        status_code=500)


class SessionStore:
    """In-memory session registry over one shared graph."""

    def __init__(self, graph: KnowledgeGraph, clock: Clock = utc_now):
        self.graph = graph
        self.clock = clock
        self.sessions: dict[str, Session] = {}

    def create(self, root: str, seed: int | None) -> Session:
        session = create_session(self.graph, root, seed=seed, clock=self.clock)
        self.sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise NotFoundError(f"unknown session {session_id}")
        return session


class CreateSessionBody(BaseModel):
    root: str
    seed: int | None = None


class SuggestBody(BaseModel):
    node_id: int


class ResolveBody(BaseModel):
    accept: str | None = None
    dismiss: bool = False


class EditBody(BaseModel):
    action: str
    text: str | None = None
    attach_to: int | None = None
    node_id: int | None = None
    a: int | None = None
    b: int | None = None
    x: float | None = None
    y: float | None = None


def _batch_payload(session: Session) -> dict:
    batch = session.pending
    source_node = session.map.node_for_concept(session.graph.label(batch.source))
    return {
        "source": source_node.node_id,
        "regime": batch.params.regime.value,
        "p": batch.params.p,
        "q": batch.params.q,
        "suggestions": [session.graph.label(cid) for cid in batch.suggestions],
    }


def create_app(store: SessionStore, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="ideamap", docs_url=None, redoc_url=None)

    @app.exception_handler(IdeamapError)
    async def handle_domain_error(request: Request, exc: IdeamapError):
        return _error_response(exc)

    @app.post("/sessions")
    def post_session(body: CreateSessionBody):
        session = store.create(body.root, body.seed)
        return {"session_id": session.session_id, "map": session.map.serialize()}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return store.get(session_id).map.serialize()

    @app.post("/sessions/{session_id}/suggestions")
    def post_suggestions(session_id: str, body: SuggestBody):
        session = store.get(session_id)
        with session.lock:
            session.request_suggestions(body.node_id)
            return _batch_payload(session)

    @app.post("/sessions/{session_id}/resolve")
    def post_resolve(session_id: str, body: ResolveBody):
        session = store.get(session_id)
        with session.lock:
            if body.accept is not None:
                node_id = session.resolve_accept(body.accept)
                return {"map": session.map.serialize(), "accepted_node": node_id}
            if body.dismiss:
                session.resolve_dismiss()
                return {"map": session.map.serialize(), "accepted_node": None}
        raise ContractViolationError("resolve needs accept or dismiss")

    @app.post("/sessions/{session_id}/edits")
    def post_edit(session_id: str, body: EditBody):
        session = store.get(session_id)
        with session.lock:
            if body.action == "manual_add":
                node_id = session.manual_add(body.text or "", _require(body.attach_to, "attach_to"))
                return {"map": session.map.serialize(), "node_id": node_id}
            if body.action == "link_add":
                session.link_add(_require(body.a, "a"), _require(body.b, "b"))
            elif body.action == "remove_node":
                session.remove_node(_require(body.node_id, "node_id"))
            elif body.action == "remove_link":
                session.remove_link(_require(body.a, "a"), _require(body.b, "b"))
            elif body.action == "move":
                session.move(_require(body.node_id, "node_id"),
                             _require(body.x, "x"), _require(body.y, "y"))
            else:
                raise ContractViolationError(f"unknown edit action {body.action!r}")
            return {"map": session.map.serialize()}

    @app.get("/sessions/{session_id}/export")
    def get_export(session_id: str):
        session = store.get(session_id)
        with session.lock:
            map_doc, log_doc = session.export()
        return {"map": map_doc, "log": log_doc}

    @app.get("/autocomplete")
    def get_autocomplete(q: str = "", limit: int = 10):
        return {"labels": store.graph.autocomplete(q, max(1, min(limit, 50)))}

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def _require(value, name: str):
    if value is None:
        raise ContractViolationError(f"edit is missing field {name!r}")
    return value
