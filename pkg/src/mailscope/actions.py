"""Append-only action log with a replayable JSON-lines serialization.

The first serialized line is a version header; each following line is one
entry with fields {seq, ts, kind, payload}. Timestamps are recorded when an
action is appended, so repeated exports are byte-identical.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import MalformedLog

LOG_VERSION = 1

ACTION_KINDS = (
    "load_dataset",
    "add_filter",
    "remove_filter",
    "assign_tag",
    "remove_node",
    "remove_edge",
    "undo_removal",
    "clusterize",
)


@dataclass(frozen=True)
class ActionEntry:
    seq: int
    ts: str
    kind: str
    payload: dict

    def to_json(self) -> dict:
        return {"seq": self.seq, "ts": self.ts, "kind": self.kind, "payload": self.payload}


@dataclass
class ActionLog:
    entries: list[ActionEntry] = field(default_factory=list)

    def append(self, kind: str, payload: dict) -> ActionEntry:
        if kind not in ACTION_KINDS:
            raise ValueError(f"unknown action kind {kind!r}")
        entry = ActionEntry(
            seq=len(self.entries) + 1,
            ts=datetime.now(timezone.utc).isoformat(),
            kind=kind,
            payload=payload,
        )
        self.entries.append(entry)
        return entry

    def to_jsonl(self) -> str:
        lines = [json.dumps({"version": LOG_VERSION}, sort_keys=True, separators=(",", ":"))]
        for entry in self.entries:
            lines.append(json.dumps(entry.to_json(), sort_keys=True, separators=(",", ":")))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "ActionLog":
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise MalformedLog("empty log")
        try:
            header = json.loads(lines[0])
        except json.JSONDecodeError as exc:
            raise MalformedLog(f"bad header line: {exc}") from exc
        if not isinstance(header, dict) or header.get("version") != LOG_VERSION:
            raise MalformedLog(f"unsupported log version: {header!r}")
        log = cls()
        for i, line in enumerate(lines[1:], start=1):
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedLog(f"bad entry on line {i + 1}: {exc}") from exc
            if not isinstance(obj, dict) or not {"seq", "ts", "kind", "payload"} <= set(obj):
                raise MalformedLog(f"entry missing fields on line {i + 1}")
            if obj["seq"] != i:
                raise MalformedLog(f"seq must increase from 1; got {obj['seq']} at position {i}")
            if obj["kind"] not in ACTION_KINDS:
                raise MalformedLog(f"unknown action kind {obj['kind']!r}")
            if not isinstance(obj["payload"], dict):
                raise MalformedLog(f"payload must be an object on line {i + 1}")
            log.entries.append(ActionEntry(obj["seq"], obj["ts"], obj["kind"], obj["payload"]))
        return log
