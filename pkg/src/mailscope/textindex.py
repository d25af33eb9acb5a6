"""Tokenization and the immutable inverted index with term statistics.

The index stores subject and body postings separately (queries distinguish
the two fields) while term weighting sums both fields' counts.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field

from .errors import DuplicateDocId, EmptyCorpus, UnknownDoc
from .records import EmailRecord

# Unicode alphanumeric runs; underscore counts as a separator.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

MIN_TOKEN_LEN = 2

FIELDS = ("subject", "body")

SNAPSHOT_VERSION = 1


def tokenize(text: str) -> list[str]:
    """Case-fold and split on non-alphanumerics; tokens shorter than two
    characters are dropped; order and duplicates are preserved."""
    if not text:
        return []
    return [t for t in _TOKEN_RE.findall(text.casefold()) if len(t) >= MIN_TOKEN_LEN]


@dataclass(frozen=True)
class CorpusIndex:
    """Inverted index over one dataset; treat as immutable after build.

    postings: term -> list of (doc_id, field, tf) with tf > 0
    doc_freq: term -> number of distinct documents containing the term
    doc_lengths: doc_id -> {field: token count}
    """

    dataset_id: str
    doc_count: int
    postings: dict[str, list[tuple[str, str, int]]]
    doc_freq: dict[str, int]
    doc_lengths: dict[str, dict[str, int]]
    # derived: term -> {doc_id: summed tf over fields}, built once for O(1) lookups
    _tf_by_doc: dict[str, dict[str, int]] = field(repr=False, default_factory=dict)

    def has_doc(self, doc_id: str) -> bool:
        return doc_id in self.doc_lengths

    @property
    def doc_ids(self) -> list[str]:
        return list(self.doc_lengths.keys())

    def term_count(self, term: str, doc_id: str) -> int:
        """Occurrences of term in the document, subject and body summed."""
        return self._tf_by_doc.get(term, {}).get(doc_id, 0)

    def docs_with_term_in_field(self, term: str, fieldname: str) -> set[str]:
        return {
            doc_id
            for doc_id, f, _tf in self.postings.get(term, [])
            if f == fieldname
        }

    def docs_with_term(self, term: str) -> set[str]:
        return set(self._tf_by_doc.get(term, {}))

    def to_snapshot(self) -> dict:
        return {
            "version": SNAPSHOT_VERSION,
            "dataset_id": self.dataset_id,
            "doc_count": self.doc_count,
            "postings": {
                t: [[d, f, tf] for d, f, tf in plist]
                for t, plist in self.postings.items()
            },
            "doc_freq": dict(self.doc_freq),
            "doc_lengths": {d: dict(fl) for d, fl in self.doc_lengths.items()},
        }

    @classmethod
    def from_snapshot(cls, obj: dict) -> "CorpusIndex":
        if obj.get("version") != SNAPSHOT_VERSION:
            raise ValueError(f"unsupported index snapshot version {obj.get('version')!r}")
        postings = {
            t: [(d, f, int(tf)) for d, f, tf in plist]
            for t, plist in obj["postings"].items()
        }
        return cls(
            dataset_id=obj["dataset_id"],
            doc_count=int(obj["doc_count"]),
            postings=postings,
            doc_freq={t: int(n) for t, n in obj["doc_freq"].items()},
            doc_lengths={d: {f: int(n) for f, n in fl.items()} for d, fl in obj["doc_lengths"].items()},
            _tf_by_doc=_sum_tf(postings),
        )


def _sum_tf(postings: dict[str, list[tuple[str, str, int]]]) -> dict[str, dict[str, int]]:
    by_doc: dict[str, dict[str, int]] = {}
    for term, plist in postings.items():
        slot = by_doc.setdefault(term, {})
        for doc_id, _fieldname, tf in plist:
            slot[doc_id] = slot.get(doc_id, 0) + tf
    return by_doc


def build_index(records: list[EmailRecord], dataset_id: str = "") -> CorpusIndex:
    """Index subject and body fields of every record."""
    if not records:
        raise EmptyCorpus("cannot index an empty record list")
    postings: dict[str, list[tuple[str, str, int]]] = {}
    doc_lengths: dict[str, dict[str, int]] = {}
    containing: dict[str, set[str]] = {}
    for record in records:
        if record.doc_id in doc_lengths:
            raise DuplicateDocId(record.doc_id)
        lengths: dict[str, int] = {}
        for fieldname in FIELDS:
            tokens = tokenize(getattr(record, fieldname))
            lengths[fieldname] = len(tokens)
            for term, tf in sorted(Counter(tokens).items()):
                postings.setdefault(term, []).append((record.doc_id, fieldname, tf))
                containing.setdefault(term, set()).add(record.doc_id)
        doc_lengths[record.doc_id] = lengths
    doc_freq = {term: len(docs) for term, docs in containing.items()}
    return CorpusIndex(
        dataset_id=dataset_id,
        doc_count=len(records),
        postings=postings,
        doc_freq=doc_freq,
        doc_lengths=doc_lengths,
        _tf_by_doc=_sum_tf(postings),
    )


def tfidf(term: str, doc_id: str, index: CorpusIndex) -> float:
    """Raw term count times ln(doc_count / doc_freq); 0.0 when the term is
    absent from the document (the log is never evaluated in that case)."""
    if not index.has_doc(doc_id):
        raise UnknownDoc(doc_id)
    f = index.term_count(term, doc_id)
    if f == 0:
        return 0.0
    df = index.doc_freq[term]
    return f * math.log(index.doc_count / df)


def doc_vector(doc_id: str, index: CorpusIndex) -> dict[str, float]:
    """Sparse weight vector for one document: an entry per occurring term,
    ordered by term; zero weights (terms present in every document) are kept
    explicit."""
    if not index.has_doc(doc_id):
        raise UnknownDoc(doc_id)
    out: dict[str, float] = {}
    for term in sorted(t for t, docs in index._tf_by_doc.items() if doc_id in docs):
        out[term] = tfidf(term, doc_id, index)
    return out
