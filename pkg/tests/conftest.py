"""Shared fixtures: hand-built corpora and independent brute-force oracles.

The oracles recount everything from the raw records via tokenize and never
touch the index or evaluator they are used to check.
"""
from __future__ import annotations

import math
import random
from datetime import datetime, timezone

import pytest

from mailscope.records import Address, EmailRecord
from mailscope.textindex import tokenize


def make_record(
    doc_id: str,
    sender: str = "a@x.com",
    recipients: tuple[str, ...] = ("b@y.com",),
    subject: str = "",
    body: str = "",
    ts: str | None = None,
    display: str | None = None,
) -> EmailRecord:
    return EmailRecord(
        doc_id=doc_id,
        sender=Address(sender, display),
        recipients=[Address(r) for r in recipients],
        subject=subject,
        body=body,
        timestamp=datetime.fromisoformat(ts).replace(tzinfo=timezone.utc) if ts else None,
        source_format="jsonl",
    )


@pytest.fixture
def five_docs() -> list[EmailRecord]:
    """d2 and d4 contain body token "money"; only d4 also has "transfer"."""
    return [
        make_record("d1", "alice@x.com", ("bob@y.com",), "meeting", "agenda for tomorrow", "2003-05-01T09:00:00"),
        make_record("d2", "carol@x.com", ("bob@y.com",), "urgent", "send money now", "2003-05-01T10:00:00"),
        make_record("d3", "bob@y.com", ("alice@x.com",), "re meeting", "sounds good", "2003-05-02T11:00:00"),
        make_record("d4", "dave@z.com", ("alice@x.com", "bob@y.com"), "wire", "money transfer to nigeria", "2003-06-10T12:00:00"),
        make_record("d5", "alice@x.com", ("dave@z.com",), "lunch", "see you at noon"),
    ]


# --- oracles -----------------------------------------------------------------

def doc_terms(record: EmailRecord) -> list[str]:
    return tokenize(record.subject) + tokenize(record.body)


def tfidf_oracle(records: list[EmailRecord], term: str, doc_id: str) -> float:
    """Direct recount of term weight from the raw text."""
    by_id = {r.doc_id: doc_terms(r) for r in records}
    f = by_id[doc_id].count(term)
    if f == 0:
        return 0.0
    df = sum(1 for terms in by_id.values() if term in terms)
    return f * math.log(len(records) / df)


def matches_oracle(record: EmailRecord, f) -> bool:
    """Per-document predicate mirror of one filter."""
    if f.field == "subject":
        return f.value in tokenize(record.subject)
    if f.field == "content":
        return f.value in tokenize(record.body)
    if f.field == "correspondent":
        return record.sender.canonical == f.value or any(
            r.canonical == f.value for r in record.recipients
        )
    if record.timestamp is None:
        return False
    start, end = f.value
    return start <= record.timestamp <= end


def evaluate_oracle(filters, records: list[EmailRecord]) -> set[str]:
    return {
        r.doc_id
        for r in records
        if all(matches_oracle(r, f) for f in filters)
    }


def seed_dataset(store, records, label="fixture"):
    """Register pre-built records as a dataset in the store."""
    from mailscope.ingest import register_dataset

    return register_dataset(records, store, label=label)


# --- random corpora ----------------------------------------------------------

VOCAB = [
    "money", "transfer", "urgent", "bank", "nigeria", "click", "link", "spam",
    "meeting", "agenda", "schedule", "report", "invoice", "receipt", "goods",
    "company", "inventory", "officials", "business", "dollars",
]

PEOPLE = [f"user{i}@mail.test" for i in range(8)]


def random_corpus(rng: random.Random, max_docs: int = 50, vocab: list[str] | None = None) -> list[EmailRecord]:
    vocab = vocab or VOCAB
    n = rng.randint(1, max_docs)
    records = []
    for i in range(n):
        sender = rng.choice(PEOPLE)
        recipients = tuple(rng.sample(PEOPLE, rng.randint(1, 3)))
        subject = " ".join(rng.choices(vocab, k=rng.randint(0, 4)))
        body = " ".join(rng.choices(vocab, k=rng.randint(0, 12)))
        ts = None
        if rng.random() < 0.8:
            ts = datetime(
                rng.randint(2000, 2010),
                rng.randint(1, 12),
                rng.randint(1, 28),
                rng.randint(0, 23),
                rng.randint(0, 59),
                tzinfo=timezone.utc,
            )
        records.append(
            EmailRecord(
                doc_id=f"d{i:04d}",
                sender=Address(sender),
                recipients=[Address(r) for r in recipients],
                subject=subject,
                body=body,
                timestamp=ts,
                source_format="jsonl",
            )
        )
    return records
