"""HTTP facade over the annotation engine for the browser UI and scripts.

Sessions are served concurrently but each session's writes are serialized
behind a per-session lock; snapshots are pure functions of session state.
"""
from __future__ import annotations

import json
import threading
import uuid
from pathlib import Path

from fastapi import Body, FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .errors import (
    BlockedAdvanceError,
    DocumentError,
    EngineError,
    GateViolation,
    IncompleteAnnotationError,
    IntegrityError,
    PhaseError,
    SessionFormatError,
    UnknownIdError,
)
from .metrics import agreement_from_exports
from .model import Document, TemporalLabel, document_from_dict
from .session import AnnotationSession, start_session
from .temporal import Inferred


class SessionCreate(BaseModel):
    doc_id: str
    annotator_id: str


class SelectionBody(BaseModel):
    mention_id: str
    status: str


class TemporalBody(BaseModel):
    a: str
    b: str
    label: str


class CorefBody(BaseModel):
    focal: str
    members: list[str] = []
    confirm: bool = False


class CausalBody(BaseModel):
    focal: str
    causes: list[str] = []


class IaaBody(BaseModel):
    kind: str
    exports: list[dict] | None = None
    session_ids: list[str] | None = None
    causal_universe: str = "before-intersection"


_ERROR_STATUS = {
    UnknownIdError: 404,
    PhaseError: 409,
    BlockedAdvanceError: 409,
    GateViolation: 409,
    IncompleteAnnotationError: 409,
    DocumentError: 400,
    SessionFormatError: 400,
    IntegrityError: 500,
}


def _error_response(exc: EngineError) -> JSONResponse:
    status = 400
    for klass, code in _ERROR_STATUS.items():
        if isinstance(exc, klass):
            status = code
            break
    body = {"code": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, BlockedAdvanceError):
        body["blocking_items"] = exc.blocking_items
    return JSONResponse(status_code=status, content=body)


class SessionStore:
    """In-memory registry with optional on-disk persistence per mutation."""

    def __init__(self, data_dir: Path | None = None):
        self.data_dir = data_dir
        self.documents: dict[str, Document] = {}
        self.sessions: dict[str, AnnotationSession] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        if data_dir is not None:
            self._load_from_disk()

    def _load_from_disk(self) -> None:
        assert self.data_dir is not None
        docs = self.data_dir / "documents"
        if docs.is_dir():
            for path in sorted(docs.glob("*.json")):
                doc = document_from_dict(json.loads(path.read_text()))
                self.documents[doc.doc_id] = doc
        sessions = self.data_dir / "sessions"
        if sessions.is_dir():
            for path in sorted(sessions.glob("*.json")):
                session = AnnotationSession.load(path.read_bytes())
                self.sessions[session.session_id] = session

    def persist_document(self, doc: Document) -> None:
        if self.data_dir is None:
            return
        target = self.data_dir / "documents"
        target.mkdir(parents=True, exist_ok=True)
        (target / f"{doc.doc_id}.json").write_text(json.dumps(doc.to_dict(), indent=2))

    def persist_session(self, session: AnnotationSession) -> None:
        if self.data_dir is None:
            return
        target = self.data_dir / "sessions"
        target.mkdir(parents=True, exist_ok=True)
        (target / f"{session.session_id}.json").write_bytes(session.save())

    def lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def get_session(self, session_id: str) -> AnnotationSession:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise UnknownIdError(f"unknown session id: {session_id!r}") from None

    def get_document(self, doc_id: str) -> Document:
        try:
            return self.documents[doc_id]
        except KeyError:
            raise UnknownIdError(f"unknown document id: {doc_id!r}") from None


def build_snapshot(session: AnnotationSession) -> dict:
    """Full-state view behind the UI: graph, progress, current unit, conflicts."""
    matrix = session.matrix
    doc = session.document
    cluster_of = {
        mid: c.cluster_id for c in session.partition.clusters for mid in c.members
    }
    nodes = [
        {
            "id": m.id,
            "surface": m.surface,
            "start": m.start,
            "end": m.end,
            "order_index": m.order_index,
            "status": m.status,
            "cluster": cluster_of.get(m.id),
        }
        for m in doc.mentions
    ]
    edges = []
    for pair in matrix.pairs():
        cell = matrix.state(pair)
        if cell is None:
            continue
        edges.append(
            {
                "a": pair.a,
                "b": pair.b,
                "label": cell.label.value,
                "provenance": "inferred" if isinstance(cell, Inferred) else "direct",
                "witness": list(cell.witness) if isinstance(cell, Inferred) else [],
            }
        )
    rep = {
        c.cluster_id: c.representative(matrix)
        for c in session.partition.clusters
    }
    status = matrix.completion()
    included = [m for m in doc.mentions if m.status == "included"]
    return {
        "session_id": session.session_id,
        "annotator_id": session.annotator_id,
        "doc_id": doc.doc_id,
        "phase": session.phase.value,
        "text": doc.text,
        "temporal_entities": [
            {"start": s, "end": e} for s, e in doc.temporal_entities
        ],
        "progress": {
            "selection": {
                "classified": sum(1 for m in doc.mentions if m.status != "candidate"),
                "total": len(doc.mentions),
                "included": len(included),
            },
            "temporal": {
                "resolved": status.resolved_pairs,
                "direct": len(matrix.direct_cells()),
                "inferred": len(matrix.inferred_cells()),
                "unannotated": status.unannotated_pairs,
                "conflicts": status.conflicts,
                "total": matrix.total_pairs(),
            },
            "coreference": {
                "clusters": len(session.partition.clusters),
                "handled": len(session.partition.handled),
            },
            "causal": {
                "links": len(session.causal.links),
                "handled": len(session.causal.handled),
            },
        },
        "current_unit": session.next_unit(),
        "graph": {
            "nodes": nodes,
            "edges": edges,
            "clusters": [c.to_dict(matrix) for c in session.partition.clusters],
            "causal_edges": [
                {"cause": c, "effect": e, "cause_rep": rep[c], "effect_rep": rep[e]}
                for c, e in sorted(session.causal.links)
            ],
        },
        "conflicts": [w.to_dict() for w in matrix.detect_conflicts()],
        "complete": status.complete,
    }


def create_app(data_dir: Path | None = None, static_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="relannot", docs_url=None, redoc_url=None)
    store = SessionStore(data_dir=data_dir)
    app.state.store = store

    @app.exception_handler(EngineError)
    async def handle_engine_error(request: Request, exc: EngineError):
        return _error_response(exc)

    @app.post("/documents")
    def ingest_document(payload: dict = Body(...)):
        doc = document_from_dict(payload)
        store.documents[doc.doc_id] = doc
        store.persist_document(doc)
        return {"doc_id": doc.doc_id, "mentions": len(doc.mentions)}

    @app.get("/documents/{doc_id}")
    def get_document(doc_id: str):
        return store.get_document(doc_id).to_dict()

    @app.post("/sessions")
    def create_session(body: SessionCreate):
        doc = store.get_document(body.doc_id)
        session = start_session(doc, body.annotator_id, session_id=uuid.uuid4().hex[:12])
        store.sessions[session.session_id] = session
        store.persist_session(session)
        return {"session_id": session.session_id, "phase": session.phase.value}

    @app.get("/sessions/{session_id}/snapshot")
    def get_snapshot(session_id: str):
        return build_snapshot(store.get_session(session_id))

    @app.get("/sessions/{session_id}/next")
    def get_next(session_id: str):
        session = store.get_session(session_id)
        unit = session.next_unit()
        if unit is None:
            return {"phase": session.phase.value, "phase_complete": True, "unit": None}
        return {"phase": session.phase.value, "phase_complete": False, "unit": unit}

    @app.post("/sessions/{session_id}/selection")
    def post_selection(session_id: str, body: SelectionBody):
        session = store.get_session(session_id)
        with store.lock_for(session_id):
            session.set_mention_status(body.mention_id, body.status)
            store.persist_session(session)
        return {"mention_id": body.mention_id, "status": body.status}

    @app.post("/sessions/{session_id}/temporal")
    def post_temporal(session_id: str, body: TemporalBody):
        session = store.get_session(session_id)
        try:
            label = TemporalLabel(body.label.upper())
        except ValueError:
            raise DocumentError(f"invalid temporal label: {body.label!r}") from None
        with store.lock_for(session_id):
            result = session.annotate_temporal(body.a, body.b, label)
            store.persist_session(session)
        return {
            "pair": result.delta.pair.to_dict(),
            "label": result.delta.label.value,
            "inferred": [
                {"a": p.a, "b": p.b, "label": lab.value}
                for p, lab in result.delta.inferred
            ],
            "conflicts": [w.to_dict() for w in result.delta.conflicts],
            "downstream": result.impact.to_dict(),
        }

    @app.post("/sessions/{session_id}/coref")
    def post_coref(session_id: str, body: CorefBody):
        session = store.get_session(session_id)
        with store.lock_for(session_id):
            result = session.form_cluster(
                body.focal, set(body.members), confirm=body.confirm
            )
            store.persist_session(session)
        return {
            "applied": result.applied,
            "cluster": result.cluster.to_dict(session.matrix) if result.cluster else None,
            "membership_conflict": result.conflict.to_dict() if result.conflict else None,
            "clusters": [c.to_dict(session.matrix) for c in session.partition.clusters],
        }

    @app.post("/sessions/{session_id}/causal")
    def post_causal(session_id: str, body: CausalBody):
        session = store.get_session(session_id)
        with store.lock_for(session_id):
            session.record_causes(body.focal, set(body.causes))
            store.persist_session(session)
        return {
            "focal": body.focal,
            "links": [
                {"cause": c, "effect": e} for c, e in sorted(session.causal.links)
            ],
        }

    @app.post("/sessions/{session_id}/advance")
    def post_advance(session_id: str):
        session = store.get_session(session_id)
        with store.lock_for(session_id):
            phase = session.advance_phase()
            store.persist_session(session)
        return {"phase": phase.value}

    @app.post("/sessions/{session_id}/revert")
    def post_revert(session_id: str):
        session = store.get_session(session_id)
        with store.lock_for(session_id):
            phase = session.revert_phase()
            store.persist_session(session)
        return {"phase": phase.value}

    @app.get("/sessions/{session_id}/conflicts")
    def get_conflicts(session_id: str):
        session = store.get_session(session_id)
        return {"conflicts": [w.to_dict() for w in session.matrix.detect_conflicts()]}

    @app.get("/sessions/{session_id}/export")
    def get_export(session_id: str):
        return store.get_session(session_id).export_annotation()

    @app.post("/iaa")
    def post_iaa(body: IaaBody):
        if body.exports:
            exports = body.exports
        elif body.session_ids:
            exports = [
                store.get_session(sid).export_annotation() for sid in body.session_ids
            ]
        else:
            raise DocumentError("provide exports or session_ids")
        if len(exports) < 2:
            raise DocumentError("need at least two exports")
        report = agreement_from_exports(
            exports, body.kind, causal_universe=body.causal_universe
        )
        return report.to_dict()

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
