"""Parsers that turn raw email corpora into normalized EmailRecords.

Supported inputs: mbox (RFC 4155 conventions), single-file EML (RFC 5322
headers), CSV with a declared header row, and JSONL with one record object
per line. Metadata-only corpora can be made analyzable by injecting bodies
from a pool (synthesize_corpus).
"""
from __future__ import annotations

import csv
import io
import json
import logging
import random
import re
import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from email import message_from_bytes, policy
from email.header import decode_header, make_header
from email.message import Message
from email.utils import getaddresses, parsedate_to_datetime

from .errors import (
    EmptyCorpus,
    EmptyPool,
    InvalidAddress,
    MissingColumn,
    UnknownFormat,
    UnreadableStream,
)
from .records import Address, DatasetHandle, EmailRecord, normalize_address

logger = logging.getLogger(__name__)

RECORD_FIELDS = ("sender", "recipients", "subject", "body", "timestamp")

_HTML_BLOCK_RE = re.compile(r"(?is)<(script|style).*?>.*?</\1>")
_HTML_TAG_RE = re.compile(r"(?s)<[^>]+>")
_WS_RE = re.compile(r"[ \t]+")

_FALLBACK_DATE_FORMATS = (
    "%Y-%m-%d %H:%M:%S",
    "%Y-%m-%d",
    "%m/%d/%Y %H:%M",
    "%m/%d/%Y",
    "%d/%m/%Y",
)


@dataclass
class ParseResult:
    """Parsed records plus the number of skipped messages/rows.

    Invariant: len(records) + skipped = messages or rows seen in the input.
    """

    records: list[EmailRecord]
    skipped: int = 0


def _strip_html(text: str) -> str:
    text = _HTML_BLOCK_RE.sub(" ", text)
    text = _HTML_TAG_RE.sub(" ", text)
    return _WS_RE.sub(" ", text).strip()


def _decode_payload(part: Message) -> str:
    payload = part.get_payload(decode=True)
    if payload is None:
        raw = part.get_payload()
        return raw if isinstance(raw, str) else ""
    charset = part.get_content_charset() or "utf-8"
    try:
        return payload.decode(charset, errors="replace")
    except (LookupError, ValueError):
        return payload.decode("utf-8", errors="replace")


def _extract_text(msg: Message) -> str:
    """Best-effort plain text from a message: first text/plain part, else
    de-tagged text/html, else empty."""
    plain: list[str] = []
    html: list[str] = []
    parts = msg.walk() if msg.is_multipart() else [msg]
    for part in parts:
        ctype = part.get_content_type()
        if part.is_multipart():
            continue
        if ctype == "text/plain":
            plain.append(_decode_payload(part))
        elif ctype == "text/html":
            html.append(_decode_payload(part))
    if plain:
        return "\n".join(plain).strip()
    if html:
        return _strip_html("\n".join(html))
    return ""


def _parse_date_header(value: str | None) -> datetime | None:
    if not value:
        return None
    try:
        dt = parsedate_to_datetime(value)
    except (TypeError, ValueError):
        return None
    if dt is None:
        return None
    if dt.tzinfo is None:
        return dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def parse_timestamp(value: str | None) -> datetime | None:
    """Parse an ISO-8601, RFC 2822, or common tabular date; None on failure."""
    if not value:
        return None
    text = value.strip()
    if not text:
        return None
    try:
        dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError:
        dt = _parse_date_header(text)
        if dt is not None:
            return dt
        for fmt in _FALLBACK_DATE_FORMATS:
            try:
                dt = datetime.strptime(text, fmt)
                break
            except ValueError:
                continue
        else:
            return None
    if dt.tzinfo is None:
        return dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def _header_text(value) -> str:
    """Decode an RFC 2047 encoded header to readable text, best effort."""
    if value is None:
        return ""
    try:
        return str(make_header(decode_header(str(value))))
    except Exception:
        return str(value)


def _addr_from_pair(display: str, addr_spec: str) -> Address | None:
    try:
        addr = normalize_address(addr_spec)
    except InvalidAddress:
        return None
    display = _header_text(display).strip() or None
    return Address(addr.canonical, display or addr.display_name)


def _addresses_from_headers(msg: Message, headers: tuple[str, ...]) -> list[Address]:
    values = []
    for h in headers:
        values.extend(msg.get_all(h, []))
    out: list[Address] = []
    seen: set[str] = set()
    for display, raw in getaddresses([str(v) for v in values]):
        addr = _addr_from_pair(display, raw)
        if addr is not None and addr.canonical not in seen:
            seen.add(addr.canonical)
            out.append(addr)
    return out


def _record_from_message(msg: Message, doc_id: str, source_format: str) -> EmailRecord | None:
    """Build a record from a parsed message; None when the sender or every
    recipient is unusable (the caller counts these as skips)."""
    sender_raw = msg.get("From")
    if sender_raw is None:
        return None
    sender = None
    for display, raw in getaddresses([str(sender_raw)]):
        sender = _addr_from_pair(display, raw)
        if sender is not None:
            break
    if sender is None:
        return None
    recipients = _addresses_from_headers(msg, ("To", "Cc"))
    if not recipients:
        return None
    subject = _header_text(msg.get("Subject"))
    return EmailRecord(
        doc_id=doc_id,
        sender=sender,
        recipients=recipients,
        subject=subject,
        body=_extract_text(msg),
        timestamp=_parse_date_header(msg.get("Date")),
        source_format=source_format,
    )


def _read_all(stream) -> bytes:
    try:
        data = stream.read()
    except OSError as exc:
        raise UnreadableStream(str(exc)) from exc
    if isinstance(data, str):
        data = data.encode("utf-8")
    return data


def _split_mbox(data: bytes) -> list[bytes]:
    """Split an mbox byte blob into raw messages on "From " envelope lines,
    undoing the conventional ">From " body escaping."""
    messages: list[bytes] = []
    current: list[bytes] | None = None
    for line in data.splitlines(keepends=True):
        if line.startswith(b"From "):
            if current is not None:
                messages.append(b"".join(current))
            current = []
            continue
        if line.startswith(b">From "):
            line = line[1:]
        if current is not None:
            current.append(line)
    if current is not None:
        messages.append(b"".join(current))
    return messages


def _next_doc_id(n: int) -> str:
    return f"d{n:06d}"


def parse_mbox(stream) -> ParseResult:
    """Parse an mbox stream; one record per message, skips counted."""
    data = _read_all(stream)
    chunks = _split_mbox(data)
    records: list[EmailRecord] = []
    skipped = 0
    for chunk in chunks:
        msg = message_from_bytes(chunk, policy=policy.compat32)
        record = _record_from_message(msg, _next_doc_id(len(records) + 1), "mbox")
        if record is None:
            skipped += 1
        else:
            records.append(record)
    if not records and skipped == 0:
        raise EmptyCorpus("no messages found in mbox stream")
    return ParseResult(records, skipped)


def parse_eml(stream) -> ParseResult:
    """Parse a single RFC 5322 message."""
    data = _read_all(stream)
    if not data.strip():
        raise EmptyCorpus("empty eml stream")
    msg = message_from_bytes(data, policy=policy.compat32)
    record = _record_from_message(msg, _next_doc_id(1), "eml")
    if record is None:
        return ParseResult([], 1)
    return ParseResult([record])


def _split_recipient_cell(value: str) -> list[Address]:
    out: list[Address] = []
    seen: set[str] = set()
    for part in re.split(r"[,;]", value or ""):
        part = part.strip()
        if not part:
            continue
        try:
            addr = normalize_address(part)
        except InvalidAddress:
            continue
        if addr.canonical not in seen:
            seen.add(addr.canonical)
            out.append(addr)
    return out


def _validate_schema_map(schema_map: dict[str, str]) -> None:
    for column, fieldname in schema_map.items():
        if fieldname not in RECORD_FIELDS:
            raise ValueError(f"schema_map maps {column!r} to unknown field {fieldname!r}")
    targets = set(schema_map.values())
    if "sender" not in targets:
        raise ValueError("schema_map must map a column to 'sender'")
    if not targets & {"body", "subject"}:
        raise ValueError("schema_map must map a column to 'body' or 'subject'")


def _row_to_record(
    getters: dict[str, list[str]],
    row: dict,
    doc_id: str,
    source_format: str,
) -> EmailRecord | None:
    def first(fieldname: str) -> str:
        for col in getters.get(fieldname, []):
            value = row.get(col)
            if value:
                return str(value)
        return ""

    try:
        sender = normalize_address(first("sender"))
    except InvalidAddress:
        return None
    recipients: list[Address] = []
    for col in getters.get("recipients", []):
        value = row.get(col)
        if isinstance(value, list):
            for item in value:
                recipients.extend(_split_recipient_cell(str(item)))
        elif value:
            recipients.extend(_split_recipient_cell(str(value)))
    # drop duplicates while keeping order
    uniq: list[Address] = []
    seen: set[str] = set()
    for a in recipients:
        if a.canonical not in seen:
            seen.add(a.canonical)
            uniq.append(a)
    if not uniq:
        return None
    return EmailRecord(
        doc_id=doc_id,
        sender=sender,
        recipients=uniq,
        subject=first("subject"),
        body=first("body"),
        timestamp=parse_timestamp(first("timestamp")),
        source_format=source_format,
    )


def parse_tabular(stream, schema_map: dict[str, str]) -> ParseResult:
    """Parse a CSV stream with a header row.

    schema_map maps column names to record fields (sender, recipients,
    subject, body, timestamp). Rows whose sender fails normalization or
    that yield no valid recipient are skipped and counted.
    """
    _validate_schema_map(schema_map)
    data = _read_all(stream)
    text = data.decode("utf-8", errors="replace")
    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    missing = [c for c in schema_map if c not in header]
    if missing:
        raise MissingColumn(f"columns not in header: {', '.join(sorted(missing))}")

    getters: dict[str, list[str]] = {}
    for column, fieldname in schema_map.items():
        getters.setdefault(fieldname, []).append(column)

    records: list[EmailRecord] = []
    skipped = 0
    for row in reader:
        record = _row_to_record(getters, row, _next_doc_id(len(records) + 1), "csv")
        if record is None:
            skipped += 1
        else:
            records.append(record)
    if not records and skipped == 0:
        raise EmptyCorpus("csv contained no data rows")
    return ParseResult(records, skipped)


DEFAULT_JSONL_MAP = {f: f for f in RECORD_FIELDS}


def parse_jsonl(stream, schema_map: dict[str, str] | None = None) -> ParseResult:
    """Parse JSON-lines input, one record object per line.

    Default field names are sender, recipients, subject, body, timestamp
    (ISO-8601); schema_map can rename keys.
    """
    mapping = dict(DEFAULT_JSONL_MAP if schema_map is None else schema_map)
    _validate_schema_map(mapping)
    data = _read_all(stream)
    text = data.decode("utf-8", errors="replace")

    getters: dict[str, list[str]] = {}
    for key, fieldname in mapping.items():
        getters.setdefault(fieldname, []).append(key)

    records: list[EmailRecord] = []
    skipped = 0
    saw_line = False
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        saw_line = True
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            skipped += 1
            continue
        if not isinstance(obj, dict):
            skipped += 1
            continue
        record = _row_to_record(getters, obj, _next_doc_id(len(records) + 1), "jsonl")
        if record is None:
            skipped += 1
        else:
            records.append(record)
    if not saw_line:
        raise EmptyCorpus("jsonl stream contained no lines")
    return ParseResult(records, skipped)


def synthesize_corpus(
    metadata_records: list[EmailRecord],
    body_pool: list[str],
    seed: int,
) -> list[EmailRecord]:
    """Fill empty bodies with a deterministic draw from body_pool.

    Pure function of (records, pool, seed): same inputs give identical
    output. Records that already have a body pass through unchanged.
    """
    if not body_pool:
        raise EmptyPool("body pool must be non-empty")
    rng = random.Random(seed)
    out: list[EmailRecord] = []
    for record in metadata_records:
        if record.body == "":
            body = body_pool[rng.randrange(len(body_pool))]
            out.append(replace(record, body=body, synthetic_body=True))
        else:
            out.append(record)
    return out


_PARSERS = {
    "mbox": lambda stream, schema_map: parse_mbox(stream),
    "eml": lambda stream, schema_map: parse_eml(stream),
    "csv": lambda stream, schema_map: parse_tabular(
        stream, schema_map if schema_map is not None else _DEFAULT_CSV_MAP
    ),
    "jsonl": lambda stream, schema_map: parse_jsonl(stream, schema_map),
}

# reasonable defaults for CSVs exported by common mail tools
_DEFAULT_CSV_MAP = {
    "from": "sender",
    "to": "recipients",
    "subject": "subject",
    "body": "body",
    "date": "timestamp",
}


def parse_stream(stream, fmt: str, schema_map: dict[str, str] | None = None) -> ParseResult:
    """Dispatch to the parser for the given format."""
    if fmt not in _PARSERS:
        raise UnknownFormat(f"unsupported format {fmt!r}")
    return _PARSERS[fmt](stream, schema_map)


def register_dataset(
    records: list[EmailRecord],
    store,
    *,
    label: str = "",
    body_pool: list[str] | None = None,
    seed: int = 0,
) -> DatasetHandle:
    """Persist records (optionally body-synthesized) under a fresh dataset
    id, index included, and return the handle."""
    if body_pool is not None:
        records = synthesize_corpus(records, body_pool, seed)
    if not records:
        raise EmptyCorpus("no usable records to register")

    from .textindex import build_index  # deferred: avoids a cycle at import time

    dataset_id = "ds" + uuid.uuid4().hex[:10]
    handle = DatasetHandle(
        dataset_id=dataset_id,
        record_count=len(records),
        ingested_at=datetime.now(timezone.utc),
        label=label,
    )
    index = build_index(records, dataset_id=dataset_id)
    store.save_dataset(handle, records, index)
    return handle


def load_dataset(
    path,
    fmt: str,
    store,
    *,
    schema_map: dict[str, str] | None = None,
    label: str | None = None,
    body_pool: list[str] | None = None,
    seed: int = 0,
) -> DatasetHandle:
    """Parse a corpus file, persist it under a fresh dataset id, and return
    the handle. Loading the same file twice yields two distinct datasets."""
    try:
        stream = open(path, "rb")
    except OSError as exc:
        raise UnreadableStream(str(exc)) from exc
    with stream:
        result = parse_stream(stream, fmt, schema_map)
    if not result.records:
        raise EmptyCorpus(f"no usable records in {path} ({result.skipped} skipped)")
    if result.skipped:
        logger.info("ingest %s: %d records, %d skipped", path, len(result.records), result.skipped)
    return register_dataset(
        result.records,
        store,
        label=label or str(path),
        body_pool=body_pool,
        seed=seed,
    )
