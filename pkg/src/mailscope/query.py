"""Progressive, reversible conjunctive filtering over an indexed dataset.

A document matches a stack iff it satisfies every filter; the empty stack
matches everything. Filters are whole-token and case-insensitive; content
filters match the body field only, subject filters the subject field only.
"""
from __future__ import annotations

import hashlib
import json
import uuid
from dataclasses import dataclass, replace
from datetime import datetime

from .errors import DatasetMismatch, DuplicateFilter, UnknownFilter
from .records import EmailRecord, normalize_address
from .textindex import CorpusIndex, tokenize

FILTER_FIELDS = ("subject", "content", "correspondent", "date_range")


@dataclass(frozen=True)
class Filter:
    filter_id: str
    field: str
    # term text, canonical address, or (start, end) datetimes for date_range
    value: str | tuple[datetime, datetime]

    def value_json(self):
        if self.field == "date_range":
            start, end = self.value
            return {"start": start.isoformat(), "end": end.isoformat()}
        return self.value

    def key(self) -> tuple:
        """Identity of the filter for duplicate detection and fingerprinting
        (the filter_id deliberately does not participate)."""
        if self.field == "date_range":
            start, end = self.value
            return (self.field, start.isoformat(), end.isoformat())
        return (self.field, self.value)

    def to_json(self) -> dict:
        return {"filter_id": self.filter_id, "field": self.field, "value": self.value_json()}


def make_filter(
    fieldname: str,
    value,
    filter_id: str | None = None,
) -> Filter:
    """Validate and canonicalize a filter.

    subject/content values must tokenize to exactly one term; correspondent
    values are normalized addresses; date_range takes (start, end) with
    start <= end (datetimes or ISO strings).
    """
    if fieldname not in FILTER_FIELDS:
        raise ValueError(f"unknown filter field {fieldname!r}")
    fid = filter_id or uuid.uuid4().hex[:12]
    if fieldname in ("subject", "content"):
        terms = tokenize(str(value))
        if len(terms) != 1:
            raise ValueError(f"filter value {value!r} must yield exactly one term")
        return Filter(fid, fieldname, terms[0])
    if fieldname == "correspondent":
        return Filter(fid, fieldname, normalize_address(str(value)).canonical)
    # date_range
    if isinstance(value, dict):
        start, end = value.get("start"), value.get("end")
    else:
        start, end = value
    if isinstance(start, str):
        start = datetime.fromisoformat(start)
    if isinstance(end, str):
        end = datetime.fromisoformat(end)
    if start is None or end is None:
        raise ValueError("date_range requires both start and end")
    if start > end:
        raise ValueError("date_range start must not exceed end")
    return Filter(fid, "date_range", (start, end))


@dataclass(frozen=True)
class QueryStack:
    dataset_id: str
    filters: tuple[Filter, ...] = ()

    def to_json(self) -> list[dict]:
        return [f.to_json() for f in self.filters]


def push_filter(stack: QueryStack, f: Filter) -> QueryStack:
    """Append a filter; identical field+value pairs are rejected so the
    action log stays unambiguous."""
    if any(existing.key() == f.key() for existing in stack.filters):
        raise DuplicateFilter(f"{f.field}:{f.value_json()}")
    if any(existing.filter_id == f.filter_id for existing in stack.filters):
        raise DuplicateFilter(f"filter id {f.filter_id} already present")
    return replace(stack, filters=stack.filters + (f,))


def remove_filter(stack: QueryStack, filter_id: str) -> QueryStack:
    remaining = tuple(f for f in stack.filters if f.filter_id != filter_id)
    if len(remaining) == len(stack.filters):
        raise UnknownFilter(filter_id)
    return replace(stack, filters=remaining)


def stack_fingerprint(filters) -> str:
    """Hash of the filter multiset: order-independent, id-independent."""
    keys = sorted(json.dumps(list(f.key()), separators=(",", ":")) for f in filters)
    digest = hashlib.sha256("\n".join(keys).encode("utf-8")).hexdigest()
    return digest


@dataclass(frozen=True)
class ResultSet:
    doc_ids: frozenset[str]
    evaluated_against: str
    stack_fingerprint: str


def _matches(f: Filter, record: EmailRecord, index: CorpusIndex) -> bool:
    if f.field == "subject":
        return record.doc_id in index.docs_with_term_in_field(f.value, "subject")
    if f.field == "content":
        return record.doc_id in index.docs_with_term_in_field(f.value, "body")
    if f.field == "correspondent":
        if record.sender.canonical == f.value:
            return True
        return any(r.canonical == f.value for r in record.recipients)
    # date_range: records without timestamps never match
    if record.timestamp is None:
        return False
    start, end = f.value
    return start <= record.timestamp <= end


def evaluate(stack: QueryStack, index: CorpusIndex, records: list[EmailRecord]) -> ResultSet:
    """Intersect the matches of every filter; the index answers term
    filters, the records answer correspondent and date filters."""
    if stack.dataset_id != index.dataset_id:
        raise DatasetMismatch(f"stack {stack.dataset_id!r} vs index {index.dataset_id!r}")
    matched = set(index.doc_lengths.keys())
    by_id = {r.doc_id: r for r in records}
    for f in stack.filters:
        if not matched:
            break
        if f.field in ("subject", "content"):
            fieldname = "subject" if f.field == "subject" else "body"
            matched &= index.docs_with_term_in_field(f.value, fieldname)
        else:
            matched = {d for d in matched if _matches(f, by_id[d], index)}
    return ResultSet(
        doc_ids=frozenset(matched),
        evaluated_against=stack.dataset_id,
        stack_fingerprint=stack_fingerprint(stack.filters),
    )
