import io
import json

import pytest

from mailscope.errors import EmptyCorpus, EmptyPool, MissingColumn, UnknownFormat, UnreadableStream
from mailscope.ingest import (
    load_dataset,
    parse_eml,
    parse_jsonl,
    parse_mbox,
    parse_tabular,
    synthesize_corpus,
)
from mailscope.records import validate_record
from mailscope.store import Store

from conftest import make_record

MBOX_THREE = b"""From alice@example.com Mon May  5 10:00:00 2003
From: Alice A <alice@example.com>
To: bob@example.com
Subject: money transfer
Date: Mon, 5 May 2003 10:00:00 +0000

please wire the money

From bob@example.com Tue May  6 11:00:00 2003
From: bob@example.com
To: alice@example.com, Carol <carol@example.com>
Subject: re: money transfer

>From my side all is ready

From carol@example.com Wed May  7 12:00:00 2003
From: carol@example.com
To: alice@example.com
Cc: bob@example.com
Subject: receipts
Date: Wed, 7 May 2003 12:00:00 +0200

receipts attached
"""

SINGLE_MESSAGE = b"""From a@x.com Thu Jan  1 00:00:00 2004
From: a@x.com
To: b@y.com

hi
"""


def test_parse_mbox_empty_stream():
    with pytest.raises(EmptyCorpus):
        parse_mbox(io.BytesIO(b""))


def test_parse_mbox_minimal_message():
    result = parse_mbox(io.BytesIO(SINGLE_MESSAGE))
    assert result.skipped == 0
    (record,) = result.records
    assert record.sender.canonical == "a@x.com"
    assert [r.canonical for r in record.recipients] == ["b@y.com"]
    assert record.body.strip() == "hi"


def test_parse_mbox_three_message_fixture():
    result = parse_mbox(io.BytesIO(MBOX_THREE))
    assert len(result.records) == 3
    assert result.skipped == 0
    r1, r2, r3 = result.records
    # header parsing
    assert r1.sender.display_name == "Alice A"
    assert r1.subject == "money transfer"
    assert r1.timestamp is not None and r1.timestamp.year == 2003
    # missing Date header keeps the record, with no timestamp
    assert r2.timestamp is None
    # ">From " body escaping is undone
    assert r2.body.strip() == "From my side all is ready"
    # To + Cc both contribute recipients; offsets normalize to UTC
    assert {a.canonical for a in r3.recipients} == {"alice@example.com", "bob@example.com"}
    assert r3.timestamp.hour == 10 and r3.timestamp.tzinfo is not None
    seen = set()
    for record in result.records:
        validate_record(record, seen)


def test_parse_mbox_skips_senderless():
    bad = b"From x Mon Jan  1 00:00:00 2001\nTo: b@y.com\nSubject: no sender\n\nbody\n" + SINGLE_MESSAGE
    result = parse_mbox(io.BytesIO(bad))
    assert len(result.records) == 1
    assert result.skipped == 1


def test_parse_mbox_unreadable_stream():
    class Broken:
        def read(self):
            raise OSError("boom")

    with pytest.raises(UnreadableStream):
        parse_mbox(Broken())


def test_parse_eml_single_message():
    eml = b"From: a@x.com\nTo: b@y.com\nSubject: hello\nDate: Thu, 1 Jan 2004 00:00:00 +0000\n\nworld\n"
    result = parse_eml(io.BytesIO(eml))
    (record,) = result.records
    assert record.subject == "hello"
    assert record.source_format == "eml"


CSV_TWO_ROWS = (
    b"from,to,subject,body,date\n"
    b"a@x.com,b@y.com,hi there,first body,2003-05-01\n"
    b'"Carol <carol@x.com>","b@y.com; d@z.com",urgent,second body,2003-05-02\n'
)

FULL_MAP = {"from": "sender", "to": "recipients", "subject": "subject", "body": "body", "date": "timestamp"}


def test_parse_tabular_two_rows():
    result = parse_tabular(io.BytesIO(CSV_TWO_ROWS), FULL_MAP)
    assert len(result.records) == 2
    assert result.skipped == 0
    first, second = result.records
    assert first.sender.canonical == "a@x.com"
    assert first.timestamp.year == 2003
    assert [r.canonical for r in second.recipients] == ["b@y.com", "d@z.com"]
    assert second.sender.display_name == "Carol"


def test_parse_tabular_missing_column():
    with pytest.raises(MissingColumn):
        parse_tabular(io.BytesIO(CSV_TWO_ROWS), {"sender_email": "sender", "body": "body"})


def test_parse_tabular_invalid_sender_skipped():
    data = b"from,to,body\nnot-an-address,b@y.com,text\na@x.com,b@y.com,more\n"
    result = parse_tabular(io.BytesIO(data), {"from": "sender", "to": "recipients", "body": "body"})
    assert len(result.records) == 1
    assert result.skipped == 1


def test_parse_tabular_requires_sender_mapping():
    with pytest.raises(ValueError):
        parse_tabular(io.BytesIO(CSV_TWO_ROWS), {"body": "body"})


def test_parse_jsonl_default_fields():
    lines = [
        {"sender": "a@x.com", "recipients": ["b@y.com"], "subject": "s", "body": "b", "timestamp": "2003-01-01T00:00:00+00:00"},
        {"sender": "b@y.com", "recipients": "a@x.com, c@z.com", "body": "again"},
    ]
    data = "\n".join(json.dumps(x) for x in lines).encode()
    result = parse_jsonl(io.BytesIO(data))
    assert len(result.records) == 2
    assert result.records[1].recipients[1].canonical == "c@z.com"


def test_parse_jsonl_bad_line_counted():
    data = b'{"sender": "a@x.com", "recipients": ["b@y.com"], "body": "x"}\nnot json\n'
    result = parse_jsonl(io.BytesIO(data))
    assert len(result.records) == 1
    assert result.skipped == 1


# --- synthesize_corpus ---------------------------------------------------------

def _empty_bodied(n):
    return [make_record(f"d{i}", body="") for i in range(n)]


def test_synthesize_single_choice_pool():
    out = synthesize_corpus(_empty_bodied(3), ["the body"], seed=1)
    assert all(r.body == "the body" and r.synthetic_body for r in out)


def test_synthesize_deterministic():
    records = _empty_bodied(10)
    pool = ["a", "b", "c", "d"]
    first = synthesize_corpus(records, pool, seed=7)
    second = synthesize_corpus(records, pool, seed=7)
    assert [r.to_json() for r in first] == [r.to_json() for r in second]


def test_synthesize_seed_changes_assignment():
    records = _empty_bodied(10)
    pool = ["a", "b", "c", "d"]
    seven = synthesize_corpus(records, pool, seed=7)
    eight = synthesize_corpus(records, pool, seed=8)
    assert [r.body for r in seven] != [r.body for r in eight]


def test_synthesize_preserves_existing_bodies():
    record = make_record("d0", body="already here")
    (out,) = synthesize_corpus([record], ["pool"], seed=0)
    assert out.body == "already here"
    assert not out.synthetic_body


def test_synthesize_empty_pool():
    with pytest.raises(EmptyPool):
        synthesize_corpus(_empty_bodied(1), [], seed=0)


# --- load_dataset ---------------------------------------------------------------

def test_load_dataset_mbox(tmp_path):
    path = tmp_path / "three.mbox"
    path.write_bytes(MBOX_THREE)
    store = Store(tmp_path / "data")
    handle = load_dataset(path, "mbox", store)
    assert handle.record_count == 3
    assert store.load_handle(handle.dataset_id).record_count == 3
    assert len(store.load_records(handle.dataset_id)) == 3


def test_load_dataset_unreadable(tmp_path):
    store = Store(tmp_path / "data")
    with pytest.raises(UnreadableStream):
        load_dataset(tmp_path / "missing.mbox", "mbox", store)


def test_load_dataset_unknown_format(tmp_path):
    path = tmp_path / "x.mbox"
    path.write_bytes(MBOX_THREE)
    store = Store(tmp_path / "data")
    with pytest.raises(UnknownFormat):
        load_dataset(path, "pst", store)


def test_load_dataset_twice_distinct_ids(tmp_path):
    path = tmp_path / "three.mbox"
    path.write_bytes(MBOX_THREE)
    store = Store(tmp_path / "data")
    first = load_dataset(path, "mbox", store)
    second = load_dataset(path, "mbox", store)
    assert first.dataset_id != second.dataset_id
    assert len(store.list_datasets()) == 2
