"""Normalized email records and addresses.

Everything downstream (indexing, querying, analytics) consumes these types,
so parsers of every input format funnel into them.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from email.utils import parseaddr

from .errors import InvalidAddress

SOURCE_FORMATS = ("mbox", "eml", "csv", "jsonl")

# local@domain, no whitespace, both sides non-empty
_ADDR_RE = re.compile(r"^[^@\s]+@[^@\s]+$")


class Address:
    """An email address with an optional display name.

    Equality and hashing use only the canonical (lowercased) form, so
    "Shivani <SHIVANI@Gmail.com>" and "shivani@gmail.com" compare equal.
    """

    __slots__ = ("canonical", "display_name")

    def __init__(self, canonical: str, display_name: str | None = None):
        self.canonical = canonical
        self.display_name = display_name

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Address):
            return NotImplemented
        return self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)

    def __repr__(self) -> str:
        if self.display_name:
            return f"Address({self.canonical!r}, display_name={self.display_name!r})"
        return f"Address({self.canonical!r})"

    def to_json(self) -> dict:
        return {"canonical": self.canonical, "display_name": self.display_name}

    @classmethod
    def from_json(cls, obj: dict) -> "Address":
        return cls(obj["canonical"], obj.get("display_name"))


def normalize_address(raw: str) -> Address:
    """Extract and canonicalize an address from "Name <a@b>" or bare forms.

    Raises InvalidAddress when no local@domain shape can be found.
    """
    if raw is None:
        raise InvalidAddress("empty address")
    text = raw.strip()
    if not text:
        raise InvalidAddress("empty address")

    display, addr = parseaddr(text)
    addr = addr.strip().strip("<>").strip()
    if not addr and "@" in text:
        # parseaddr can give up on sloppy input; fall back to the raw text
        addr = text.strip("<>").strip()
    canonical = addr.lower()
    if not _ADDR_RE.match(canonical) or canonical.count("@") != 1:
        raise InvalidAddress(f"not a recognizable address: {raw!r}")
    display = display.strip() or None
    return Address(canonical, display)


@dataclass
class EmailRecord:
    """One normalized email message."""

    doc_id: str
    sender: Address
    recipients: list[Address]
    subject: str = ""
    body: str = ""
    timestamp: datetime | None = None
    source_format: str = "mbox"
    synthetic_body: bool = False

    def to_json(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "sender": self.sender.to_json(),
            "recipients": [r.to_json() for r in self.recipients],
            "subject": self.subject,
            "body": self.body,
            "timestamp": self.timestamp.isoformat() if self.timestamp else None,
            "source_format": self.source_format,
            "synthetic_body": self.synthetic_body,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EmailRecord":
        ts = obj.get("timestamp")
        return cls(
            doc_id=obj["doc_id"],
            sender=Address.from_json(obj["sender"]),
            recipients=[Address.from_json(r) for r in obj["recipients"]],
            subject=obj.get("subject", ""),
            body=obj.get("body", ""),
            timestamp=datetime.fromisoformat(ts) if ts else None,
            source_format=obj.get("source_format", "mbox"),
            synthetic_body=bool(obj.get("synthetic_body", False)),
        )


def validate_record(record: EmailRecord, seen_ids: set[str] | None = None) -> None:
    """Assert the record invariants; raises ValueError on violation."""
    if not record.doc_id:
        raise ValueError("doc_id must be non-empty")
    if seen_ids is not None:
        if record.doc_id in seen_ids:
            raise ValueError(f"duplicate doc_id {record.doc_id}")
        seen_ids.add(record.doc_id)
    if not _ADDR_RE.match(record.sender.canonical):
        raise ValueError(f"sender not normalized: {record.sender.canonical!r}")
    if record.sender.canonical != record.sender.canonical.lower():
        raise ValueError("sender not case-folded")
    if not record.recipients:
        raise ValueError("recipients must be non-empty")
    for r in record.recipients:
        if not _ADDR_RE.match(r.canonical) or r.canonical != r.canonical.lower():
            raise ValueError(f"recipient not normalized: {r.canonical!r}")
    if record.timestamp is not None and record.timestamp.tzinfo is None:
        raise ValueError("timestamp must be timezone-aware")
    if record.source_format not in SOURCE_FORMATS:
        raise ValueError(f"unknown source_format {record.source_format!r}")


@dataclass
class DatasetHandle:
    """Registry entry for one ingested dataset."""

    dataset_id: str
    record_count: int
    ingested_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))
    label: str = ""

    def to_json(self) -> dict:
        return {
            "dataset_id": self.dataset_id,
            "record_count": self.record_count,
            "ingested_at": self.ingested_at.isoformat(),
            "label": self.label,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DatasetHandle":
        return cls(
            dataset_id=obj["dataset_id"],
            record_count=obj["record_count"],
            ingested_at=datetime.fromisoformat(obj["ingested_at"]),
            label=obj.get("label", ""),
        )
