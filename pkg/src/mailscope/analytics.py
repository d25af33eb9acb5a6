"""Correspondent statistics and timeline histograms for a filtered set."""
from __future__ import annotations

from dataclasses import dataclass

from .query import ResultSet
from .records import Address, EmailRecord

GRANULARITIES = ("day", "month", "year")

_BUCKET_FORMATS = {"year": "%Y", "month": "%Y-%m", "day": "%Y-%m-%d"}


@dataclass(frozen=True)
class CorrespondentStat:
    address: Address
    sent: int
    received: int

    @property
    def total(self) -> int:
        return self.sent + self.received


@dataclass(frozen=True)
class TimeBin:
    bucket: str
    count: int


def correspondent_stats(results: ResultSet, records: list[EmailRecord]) -> list[CorrespondentStat]:
    """Per-address sent/received counts over the matched emails, busiest
    first (total descending, ties by canonical address)."""
    sent: dict[str, int] = {}
    received: dict[str, int] = {}
    first_seen: dict[str, Address] = {}
    for record in records:
        if record.doc_id not in results.doc_ids:
            continue
        s = record.sender
        first_seen.setdefault(s.canonical, s)
        sent[s.canonical] = sent.get(s.canonical, 0) + 1
        # every recipient of a multi-recipient email counts as a full receive
        for r in record.recipients:
            first_seen.setdefault(r.canonical, r)
            received[r.canonical] = received.get(r.canonical, 0) + 1
    stats = [
        CorrespondentStat(first_seen[c], sent.get(c, 0), received.get(c, 0))
        for c in first_seen
    ]
    stats.sort(key=lambda st: (-st.total, st.address.canonical))
    return stats


def timeline_bins(
    results: ResultSet,
    records: list[EmailRecord],
    granularity: str,
) -> list[TimeBin]:
    """Matched emails bucketed by UTC calendar key; undated emails are
    omitted; bins come back chronologically with empty buckets absent."""
    if granularity not in GRANULARITIES:
        raise ValueError(f"granularity must be one of {GRANULARITIES}")
    fmt = _BUCKET_FORMATS[granularity]
    counts: dict[str, int] = {}
    for record in records:
        if record.doc_id not in results.doc_ids or record.timestamp is None:
            continue
        bucket = record.timestamp.strftime(fmt)
        counts[bucket] = counts.get(bucket, 0) + 1
    return [TimeBin(bucket, counts[bucket]) for bucket in sorted(counts)]
