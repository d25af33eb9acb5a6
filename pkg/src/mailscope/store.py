"""Filesystem persistence: dataset registry, index snapshots, the global
tag store, and session states.

Layout under the data directory:
    datasets/<id>/records.jsonl
    datasets/<id>/handle.json
    datasets/<id>/index.snapshot
    tags.json
    sessions/<id>.json
    sessions/<id>.actions.jsonl

All writes go through write-temp-then-rename so readers always see the last
complete version.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .actions import ActionLog
from .entities import TagStore
from .errors import StorageFailure, UnknownDataset, UnknownSession
from .query import QueryStack, make_filter
from .records import DatasetHandle, EmailRecord
from .textindex import CorpusIndex


@dataclass
class SessionState:
    """Snapshot of one analysis session; the action log fully determines the
    rest given the dataset."""

    session_id: str
    dataset_id: str
    query_stack: QueryStack
    graph_edits: list[dict] = field(default_factory=list)
    clustering_params: tuple[int, int] | None = None  # (k, seed)
    action_log: ActionLog = field(default_factory=ActionLog)

    def to_json(self) -> dict:
        return {
            "session_id": self.session_id,
            "dataset_id": self.dataset_id,
            "filters": self.query_stack.to_json(),
            "graph_edits": list(self.graph_edits),
            "clustering_params": (
                {"k": self.clustering_params[0], "seed": self.clustering_params[1]}
                if self.clustering_params
                else None
            ),
        }

    @classmethod
    def from_json(cls, obj: dict, action_log: ActionLog) -> "SessionState":
        filters = tuple(
            make_filter(f["field"], f["value"], filter_id=f["filter_id"])
            for f in obj.get("filters", [])
        )
        params = obj.get("clustering_params")
        return cls(
            session_id=obj["session_id"],
            dataset_id=obj["dataset_id"],
            query_stack=QueryStack(obj["dataset_id"], filters),
            graph_edits=list(obj.get("graph_edits", [])),
            clustering_params=(params["k"], params["seed"]) if params else None,
            action_log=action_log,
        )


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, path)
    except OSError as exc:
        raise StorageFailure(f"writing {path}: {exc}") from exc


class Store:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        try:
            (self.root / "datasets").mkdir(parents=True, exist_ok=True)
            (self.root / "sessions").mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageFailure(f"creating data directory {root}: {exc}") from exc

    # --- datasets ---------------------------------------------------------

    def _dataset_dir(self, dataset_id: str) -> Path:
        return self.root / "datasets" / dataset_id

    def save_dataset(
        self,
        handle: DatasetHandle,
        records: list[EmailRecord],
        index: CorpusIndex,
    ) -> None:
        ddir = self._dataset_dir(handle.dataset_id)
        try:
            ddir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageFailure(str(exc)) from exc
        lines = [json.dumps(r.to_json(), sort_keys=True, separators=(",", ":")) for r in records]
        _atomic_write(ddir / "records.jsonl", "\n".join(lines) + "\n")
        _atomic_write(
            ddir / "index.snapshot",
            json.dumps(index.to_snapshot(), sort_keys=True, separators=(",", ":")),
        )
        _atomic_write(
            ddir / "handle.json",
            json.dumps(handle.to_json(), sort_keys=True, separators=(",", ":")),
        )

    def has_dataset(self, dataset_id: str) -> bool:
        return (self._dataset_dir(dataset_id) / "handle.json").exists()

    def load_handle(self, dataset_id: str) -> DatasetHandle:
        path = self._dataset_dir(dataset_id) / "handle.json"
        if not path.exists():
            raise UnknownDataset(dataset_id)
        return DatasetHandle.from_json(json.loads(path.read_text(encoding="utf-8")))

    def list_datasets(self) -> list[DatasetHandle]:
        handles = []
        datasets_dir = self.root / "datasets"
        for entry in sorted(datasets_dir.iterdir()) if datasets_dir.exists() else []:
            if (entry / "handle.json").exists():
                handles.append(self.load_handle(entry.name))
        handles.sort(key=lambda h: (h.ingested_at, h.dataset_id))
        return handles

    def load_records(self, dataset_id: str) -> list[EmailRecord]:
        path = self._dataset_dir(dataset_id) / "records.jsonl"
        if not path.exists():
            raise UnknownDataset(dataset_id)
        records = []
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                records.append(EmailRecord.from_json(json.loads(line)))
        return records

    def load_index(self, dataset_id: str) -> CorpusIndex:
        path = self._dataset_dir(dataset_id) / "index.snapshot"
        if not path.exists():
            raise UnknownDataset(dataset_id)
        return CorpusIndex.from_snapshot(json.loads(path.read_text(encoding="utf-8")))

    # --- tags ---------------------------------------------------------------

    @property
    def _tags_path(self) -> Path:
        return self.root / "tags.json"

    def load_tag_store(self) -> TagStore:
        if not self._tags_path.exists():
            return TagStore()
        try:
            return TagStore.from_json(json.loads(self._tags_path.read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            raise StorageFailure(f"reading tag store: {exc}") from exc

    def persist_tag_store(self, tag_store: TagStore) -> None:
        _atomic_write(
            self._tags_path,
            json.dumps(tag_store.to_json(), sort_keys=True, separators=(",", ":")),
        )

    # --- sessions -----------------------------------------------------------

    def _session_path(self, session_id: str) -> Path:
        return self.root / "sessions" / f"{session_id}.json"

    def _actions_path(self, session_id: str) -> Path:
        return self.root / "sessions" / f"{session_id}.actions.jsonl"

    def save_session(self, state: SessionState) -> None:
        _atomic_write(
            self._session_path(state.session_id),
            json.dumps(state.to_json(), sort_keys=True, separators=(",", ":")),
        )
        _atomic_write(self._actions_path(state.session_id), state.action_log.to_jsonl())

    def load_session(self, session_id: str) -> SessionState:
        path = self._session_path(session_id)
        if not path.exists():
            raise UnknownSession(session_id)
        try:
            obj = json.loads(path.read_text(encoding="utf-8"))
            log_path = self._actions_path(session_id)
            log = ActionLog.from_jsonl(log_path.read_text(encoding="utf-8")) if log_path.exists() else ActionLog()
        except (OSError, json.JSONDecodeError) as exc:
            raise StorageFailure(f"reading session {session_id}: {exc}") from exc
        return SessionState.from_json(obj, log)

    def list_sessions(self) -> list[str]:
        sdir = self.root / "sessions"
        return sorted(p.stem for p in sdir.glob("*.json"))
