import pytest
from hypothesis import given
from hypothesis import strategies as st

from mailscope.errors import InvalidAddress
from mailscope.records import Address, normalize_address, validate_record

from conftest import make_record


def test_normalize_display_name_form():
    addr = normalize_address("Shivani <SHIVANI@Gmail.com>")
    assert addr.canonical == "shivani@gmail.com"
    assert addr.display_name == "Shivani"


def test_normalize_bare_form():
    addr = normalize_address("a@b.com")
    assert addr.canonical == "a@b.com"
    assert addr.display_name is None


def test_normalize_rejects_missing_at():
    with pytest.raises(InvalidAddress):
        normalize_address("no-at-sign")


@pytest.mark.parametrize("raw", ["", "   ", "a@@b.com", "@b.com", "a@"])
def test_normalize_rejects_malformed(raw):
    with pytest.raises(InvalidAddress):
        normalize_address(raw)


def test_normalize_strips_whitespace_and_brackets():
    assert normalize_address("  <Bob@Example.COM>  ").canonical == "bob@example.com"


def test_address_equality_ignores_display_name():
    assert Address("a@b.com", "Alice") == Address("a@b.com")
    assert hash(Address("a@b.com", "Alice")) == hash(Address("a@b.com"))
    assert Address("a@b.com") != Address("c@b.com")


@given(
    st.from_regex(r"[A-Za-z][A-Za-z0-9.+-]{0,10}@[A-Za-z][A-Za-z0-9.-]{0,10}", fullmatch=True)
)
def test_normalize_idempotent(raw):
    first = normalize_address(raw)
    again = normalize_address(first.canonical)
    assert again == first
    assert again.canonical == first.canonical


def test_validate_record_accepts_fixture():
    validate_record(make_record("d1", ts="2003-05-01T10:00:00"))


def test_validate_record_rejects_empty_recipients():
    record = make_record("d1")
    record.recipients = []
    with pytest.raises(ValueError):
        validate_record(record)


def test_record_json_round_trip():
    record = make_record(
        "d9", "x@y.com", ("a@b.com", "c@d.com"), "Hello", "Body text",
        ts="2004-01-02T03:04:05", display="Xavier",
    )
    from mailscope.records import EmailRecord

    clone = EmailRecord.from_json(record.to_json())
    assert clone == record
