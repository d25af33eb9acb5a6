"""HTTP/JSON API over the analysis core; one endpoint family per panel.

Sessions live server-side keyed by session_id, so the per-session action
log is authoritative and downloadable. Mutations within a session are
serialized with a lock; reads of the shared immutable index are free.
"""
from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field as dataclass_field

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from . import payloads
from .analytics import GRANULARITIES
from .entities import TagStore
from .errors import (
    ClusterCapExceeded,
    DatasetMismatch,
    DuplicateDocId,
    DuplicateFilter,
    EmptyCorpus,
    EmptyLabel,
    EmptyPool,
    EmptyResults,
    EmptyUndoStack,
    IndexOutOfRange,
    InvalidAddress,
    InvalidK,
    MailscopeError,
    MalformedLog,
    MissingColumn,
    StorageFailure,
    UnknownDataset,
    UnknownDoc,
    UnknownEdge,
    UnknownFilter,
    UnknownFormat,
    UnknownNode,
    UnknownSession,
    UnreadableStream,
)
from .ingest import parse_stream, register_dataset
from .session import Session
from .store import Store

_STATUS_BY_ERROR = {
    InvalidAddress: 400,
    EmptyLabel: 400,
    MalformedLog: 400,
    UnknownFormat: 400,
    MissingColumn: 400,
    EmptyCorpus: 400,
    EmptyPool: 400,
    DatasetMismatch: 400,
    DuplicateDocId: 400,
    UnknownSession: 404,
    UnknownFilter: 404,
    UnknownDataset: 404,
    UnknownDoc: 404,
    UnknownNode: 404,
    UnknownEdge: 404,
    DuplicateFilter: 409,
    InvalidK: 422,
    EmptyResults: 422,
    EmptyUndoStack: 422,
    IndexOutOfRange: 422,
    ClusterCapExceeded: 422,
    StorageFailure: 500,
    UnreadableStream: 500,
}


def _status_for(exc: MailscopeError) -> int:
    for klass in type(exc).__mro__:
        if klass in _STATUS_BY_ERROR:
            return _STATUS_BY_ERROR[klass]
    return 500


@dataclass
class ServiceConfig:
    data_dir: str = "mailscope_data"
    cluster_doc_cap: int = 2000
    restarts: int = 10
    cors_origins: tuple[str, ...] = ("*",)


class CreateSessionBody(BaseModel):
    dataset_id: str


class AddFilterBody(BaseModel):
    field: str
    value: str | dict


class TagBody(BaseModel):
    term: str
    tag: str
    session_id: str | None = None


class GraphRemoveBody(BaseModel):
    kind: str  # "node" | "edge"
    payload: dict


class ClusterBody(BaseModel):
    k: int
    seed: int = 0


@dataclass
class _AppState:
    store: Store
    tag_store: TagStore
    config: ServiceConfig
    sessions: dict[str, Session] = dataclass_field(default_factory=dict)
    locks: dict[str, threading.Lock] = dataclass_field(default_factory=dict)
    registry_lock: threading.Lock = dataclass_field(default_factory=threading.Lock)


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    store = Store(config.data_dir)
    state = _AppState(store=store, tag_store=store.load_tag_store(), config=config)

    app = FastAPI(title="mailscope", version="0.1.0")
    app.state.mailscope = state
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(MailscopeError)
    async def _domain_error(_request: Request, exc: MailscopeError):
        status = _status_for(exc)
        return JSONResponse(
            status_code=status,
            content={"status": status, "code": exc.code, "message": str(exc)},
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"status": 400, "code": "ValidationError", "message": str(exc.errors())},
        )

    @app.exception_handler(ValueError)
    async def _value_error(_request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={"status": 400, "code": "ValidationError", "message": str(exc)},
        )

    def _session(session_id: str) -> tuple[Session, threading.Lock]:
        with state.registry_lock:
            session = state.sessions.get(session_id)
            if session is None:
                session = Session.load(
                    store,
                    state.tag_store,
                    session_id,
                    restarts=config.restarts,
                    cluster_doc_cap=config.cluster_doc_cap,
                )
                state.sessions[session_id] = session
            lock = state.locks.setdefault(session_id, threading.Lock())
        return session, lock

    # --- datasets -----------------------------------------------------------

    @app.post("/datasets")
    def upload_dataset(
        file: UploadFile = File(...),
        format: str = Form(...),
        label: str | None = Form(None),
        schema_map: str | None = Form(None),
        body_pool: str | None = Form(None),
        seed: int = Form(0),
    ):
        mapping = json.loads(schema_map) if schema_map else None
        pool = json.loads(body_pool) if body_pool else None
        result = parse_stream(file.file, format, mapping)
        if not result.records:
            raise EmptyCorpus(f"no usable records ({result.skipped} skipped)")
        handle = register_dataset(
            result.records,
            store,
            label=label or (file.filename or "upload"),
            body_pool=pool,
            seed=seed,
        )
        return payloads.dataset_payload(handle)

    @app.get("/datasets")
    def list_datasets():
        return [payloads.dataset_payload(h) for h in store.list_datasets()]

    # --- sessions -----------------------------------------------------------

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        session = Session.create(
            store,
            state.tag_store,
            body.dataset_id,
            restarts=config.restarts,
            cluster_doc_cap=config.cluster_doc_cap,
        )
        with state.registry_lock:
            state.sessions[session.session_id] = session
            state.locks[session.session_id] = threading.Lock()
        return payloads.session_payload(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session, lock = _session(session_id)
        with lock:
            return payloads.session_payload(session)

    @app.post("/sessions/{session_id}/filters")
    def add_filter(session_id: str, body: AddFilterBody):
        session, lock = _session(session_id)
        with lock:
            session.add_filter(body.field, body.value)
            return payloads.session_payload(session)

    @app.delete("/sessions/{session_id}/filters/{filter_id}")
    def delete_filter(session_id: str, filter_id: str):
        session, lock = _session(session_id)
        with lock:
            session.drop_filter(filter_id)
            return payloads.session_payload(session)

    @app.get("/sessions/{session_id}/results")
    def get_results(session_id: str, offset: int = 0, limit: int = payloads.DEFAULT_PAGE_SIZE):
        if offset < 0 or limit < 1:
            raise ValueError("offset must be >= 0 and limit >= 1")
        session, lock = _session(session_id)
        with lock:
            return payloads.results_page(session, offset, limit)

    @app.get("/sessions/{session_id}/correspondents")
    def get_correspondents(session_id: str):
        session, lock = _session(session_id)
        with lock:
            return payloads.correspondents_payload(session)

    @app.get("/sessions/{session_id}/timeline")
    def get_timeline(session_id: str, granularity: str = "month"):
        if granularity not in GRANULARITIES:
            raise ValueError(f"granularity must be one of {GRANULARITIES}")
        session, lock = _session(session_id)
        with lock:
            return payloads.timeline_payload(session, granularity)

    @app.get("/sessions/{session_id}/entities")
    def get_entities(session_id: str, k: int = 20):
        if k < 1:
            raise ValueError("k must be >= 1")
        session, lock = _session(session_id)
        with lock:
            return payloads.entities_payload(session, k)

    # --- tags ---------------------------------------------------------------

    @app.post("/tags")
    def assign_tag(body: TagBody):
        if body.session_id:
            session, lock = _session(body.session_id)
            with lock:
                session.assign_tag(body.term, body.tag)
                return payloads.tag_assignment_payload(session, body.term)
        state.tag_store.assign(body.term, body.tag)
        store.persist_tag_store(state.tag_store)
        return {
            "term": body.term.strip().casefold(),
            "tags": sorted(state.tag_store.lookup(body.term)),
        }

    @app.get("/tags/distribution")
    def tag_distribution():
        return payloads.tag_distribution_payload(state.tag_store)

    # --- contact graph --------------------------------------------------------

    @app.get("/sessions/{session_id}/graph")
    def get_graph(session_id: str):
        session, lock = _session(session_id)
        with lock:
            return payloads.graph_payload(session)

    @app.post("/sessions/{session_id}/graph/remove")
    def graph_remove(session_id: str, body: GraphRemoveBody):
        session, lock = _session(session_id)
        with lock:
            if body.kind == "node":
                session.remove_graph_node(body.payload["address"])
            elif body.kind == "edge":
                session.remove_graph_edge(body.payload["a"], body.payload["b"])
            else:
                raise ValueError(f"kind must be 'node' or 'edge', got {body.kind!r}")
            return payloads.graph_payload(session)

    @app.post("/sessions/{session_id}/graph/undo")
    def graph_undo(session_id: str):
        session, lock = _session(session_id)
        with lock:
            session.undo_graph_removal()
            return payloads.graph_payload(session)

    # --- clustering -------------------------------------------------------------

    @app.post("/sessions/{session_id}/cluster")
    def run_cluster(session_id: str, body: ClusterBody):
        session, lock = _session(session_id)
        with lock:
            session.run_clusterize(body.k, body.seed)
            return payloads.cluster_payload(session)

    @app.get("/sessions/{session_id}/cluster")
    def get_cluster(session_id: str):
        session, lock = _session(session_id)
        with lock:
            return payloads.cluster_payload(session)

    @app.get("/sessions/{session_id}/cluster/{cluster_index}/members")
    def get_cluster_members(session_id: str, cluster_index: int):
        session, lock = _session(session_id)
        with lock:
            return payloads.cluster_members_payload(session, cluster_index)

    # --- action log -----------------------------------------------------------

    @app.get("/sessions/{session_id}/actions")
    def get_actions(session_id: str):
        session, lock = _session(session_id)
        with lock:
            return PlainTextResponse(
                session.export_action_log(), media_type="application/x-ndjson"
            )

    return app
