"""One analyst session: a dataset, a filter stack, view state, and the
append-only action log that can rebuild all of it.

Every mutation goes through this class so the log stays authoritative:
an exported log replayed against the same dataset reproduces the final
filter stack, tag deltas, graph edit stack, and clustering parameters.
"""
from __future__ import annotations

import uuid

from .actions import ActionLog
from .cluster import Clustering, clusterize
from .entities import TagStore
from .errors import (
    ClusterCapExceeded,
    MailscopeError,
    MalformedLog,
    ReplayDivergence,
)
from .graph import ContactGraph, build_graph, remove_edge, remove_node, undo_removal
from .query import (
    Filter,
    QueryStack,
    ResultSet,
    evaluate,
    make_filter,
    push_filter,
    remove_filter,
)
from .store import SessionState, Store


class Session:
    def __init__(
        self,
        session_id: str,
        store: Store,
        tag_store: TagStore,
        dataset_id: str,
        *,
        persist: bool = True,
        restarts: int = 10,
        cluster_doc_cap: int | None = None,
    ):
        self.session_id = session_id
        self.store = store
        self.tag_store = tag_store
        self.dataset_id = dataset_id
        self.handle = store.load_handle(dataset_id)
        self.records = store.load_records(dataset_id)
        self.index = store.load_index(dataset_id)
        self.stack = QueryStack(dataset_id)
        self.log = ActionLog()
        self.persist = persist
        self.restarts = restarts
        self.cluster_doc_cap = cluster_doc_cap
        self._results: ResultSet | None = None
        self._graph: ContactGraph | None = None
        self._clustering: Clustering | None = None
        self.clustering_params: tuple[int, int] | None = None

    # --- lifecycle ---------------------------------------------------------

    @classmethod
    def create(
        cls,
        store: Store,
        tag_store: TagStore,
        dataset_id: str,
        session_id: str | None = None,
        **kwargs,
    ) -> "Session":
        session = cls(
            session_id or "s" + uuid.uuid4().hex[:12],
            store,
            tag_store,
            dataset_id,
            **kwargs,
        )
        session.log.append("load_dataset", {"dataset_id": dataset_id})
        session._save()
        return session

    @classmethod
    def load(cls, store: Store, tag_store: TagStore, session_id: str, **kwargs) -> "Session":
        state = store.load_session(session_id)
        session = cls(session_id, store, tag_store, state.dataset_id, **kwargs)
        session.log = state.action_log
        for f in state.query_stack.filters:
            session.stack = push_filter(session.stack, f)
        for edit in state.graph_edits:
            session._apply_graph_edit(edit)
        if state.clustering_params:
            k, seed = state.clustering_params
            session.clustering_params = (k, seed)
        return session

    def _save(self) -> None:
        if self.persist:
            self.store.save_session(self.to_state())

    def to_state(self) -> SessionState:
        edits = (
            [r.redo_payload() for r in self._graph.deletion_stack] if self._graph else []
        )
        return SessionState(
            session_id=self.session_id,
            dataset_id=self.dataset_id,
            query_stack=self.stack,
            graph_edits=edits,
            clustering_params=self.clustering_params,
            action_log=self.log,
        )

    # --- query stack ---------------------------------------------------------

    def results(self) -> ResultSet:
        if self._results is None:
            self._results = evaluate(self.stack, self.index, self.records)
        return self._results

    def _invalidate_views(self) -> None:
        # the filtered set changed: panels derive from it, so the graph is
        # rebuilt (edits cleared) and any clustering is discarded
        self._results = None
        self._graph = None
        self._clustering = None
        self.clustering_params = None

    def add_filter(self, fieldname: str, value, filter_id: str | None = None) -> Filter:
        f = make_filter(fieldname, value, filter_id=filter_id)
        self.stack = push_filter(self.stack, f)
        self._invalidate_views()
        self.log.append("add_filter", f.to_json())
        self._save()
        return f

    def drop_filter(self, filter_id: str) -> None:
        self.stack = remove_filter(self.stack, filter_id)
        self._invalidate_views()
        self.log.append("remove_filter", {"filter_id": filter_id})
        self._save()

    # --- tags ---------------------------------------------------------------

    def assign_tag(self, term: str, tag: str) -> set[str]:
        self.tag_store.assign(term, tag)
        if self.persist:
            self.store.persist_tag_store(self.tag_store)
        self.log.append("assign_tag", {"term": term.strip().casefold(), "tag": tag.strip()})
        self._save()
        return self.tag_store.lookup(term)

    # --- contact graph --------------------------------------------------------

    def graph(self) -> ContactGraph:
        if self._graph is None:
            self._graph = build_graph(self.results(), self.records)
        return self._graph

    def remove_graph_node(self, address: str) -> None:
        remove_node(self.graph(), address)
        self.log.append("remove_node", {"address": address})
        self._save()

    def remove_graph_edge(self, a: str, b: str) -> None:
        remove_edge(self.graph(), (a, b))
        self.log.append("remove_edge", {"a": a, "b": b})
        self._save()

    def undo_graph_removal(self) -> None:
        undo_removal(self.graph())
        self.log.append("undo_removal", {})
        self._save()

    def _apply_graph_edit(self, edit: dict) -> None:
        if edit.get("kind") == "node":
            remove_node(self.graph(), edit["address"])
        else:
            remove_edge(self.graph(), (edit["a"], edit["b"]))

    # --- clustering -------------------------------------------------------------

    def run_clusterize(self, k: int, seed: int = 0) -> Clustering:
        results = self.results()
        if self.cluster_doc_cap is not None and len(results.doc_ids) > self.cluster_doc_cap:
            raise ClusterCapExceeded(
                f"{len(results.doc_ids)} documents exceeds the cap of {self.cluster_doc_cap}"
            )
        clustering = clusterize(results, self.index, k, seed, restarts=self.restarts)
        self._clustering = clustering
        self.clustering_params = (k, seed)
        self.log.append("clusterize", {"k": k, "seed": seed})
        self._save()
        return clustering

    def clustering(self) -> Clustering | None:
        if self._clustering is None and self.clustering_params is not None:
            k, seed = self.clustering_params
            self._clustering = clusterize(
                self.results(), self.index, k, seed, restarts=self.restarts
            )
        return self._clustering

    # --- action log -----------------------------------------------------------

    def export_action_log(self) -> str:
        return self.log.to_jsonl()


def replay(
    log: ActionLog,
    dataset_id: str,
    store: Store,
    tag_store: TagStore,
    *,
    session_id: str | None = None,
    persist: bool = False,
    restarts: int = 10,
) -> Session:
    """Rebuild a session by re-applying a log against the same dataset.

    Raises MalformedLog for structural problems and ReplayDivergence when an
    action cannot be applied (for example a removal of a filter id that was
    never created).
    """
    if not log.entries:
        raise MalformedLog("log has no entries")
    first = log.entries[0]
    if first.kind != "load_dataset":
        raise MalformedLog("first action must be load_dataset")
    if first.payload.get("dataset_id") != dataset_id:
        raise ReplayDivergence(
            f"log was recorded against {first.payload.get('dataset_id')!r}, not {dataset_id!r}"
        )
    session = Session.create(
        store,
        tag_store,
        dataset_id,
        session_id=session_id,
        persist=persist,
        restarts=restarts,
    )
    for entry in log.entries[1:]:
        try:
            _apply_entry(session, entry.kind, entry.payload)
        except MalformedLog:
            raise
        except MailscopeError as exc:
            raise ReplayDivergence(f"action {entry.seq} ({entry.kind}) failed: {exc}") from exc
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedLog(f"action {entry.seq} ({entry.kind}) is malformed: {exc}") from exc
    return session


def _apply_entry(session: Session, kind: str, payload: dict) -> None:
    if kind == "load_dataset":
        raise MalformedLog("load_dataset may only appear first")
    if kind == "add_filter":
        session.add_filter(payload["field"], payload["value"], filter_id=payload["filter_id"])
    elif kind == "remove_filter":
        session.drop_filter(payload["filter_id"])
    elif kind == "assign_tag":
        session.assign_tag(payload["term"], payload["tag"])
    elif kind == "remove_node":
        session.remove_graph_node(payload["address"])
    elif kind == "remove_edge":
        session.remove_graph_edge(payload["a"], payload["b"])
    elif kind == "undo_removal":
        session.undo_graph_removal()
    elif kind == "clusterize":
        session.run_clusterize(int(payload["k"]), int(payload["seed"]))
    else:
        raise MalformedLog(f"unknown action kind {kind!r}")
