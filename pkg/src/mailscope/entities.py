"""Entity ranking over the filtered subset and the global tag store.

Entity scores treat the matched documents as their own collection: term
weight is summed over those documents with the inverse-document-frequency
recomputed inside the subset, so terms distinctive of the current query
float to the top.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EmptyLabel, EmptyResults
from .query import ResultSet
from .records import EmailRecord
from .textindex import tokenize

# Small fixed stoplist (articles, pronouns, prepositions, a few conjunctions).
# Applies to entity ranking only; the index keeps every token so queries on
# common words still work.
STOPWORDS = frozenset(
    """
    a an the
    i me my you your he him his she her it its we us our they them their
    this that these those
    at by for from in into of off on onto out over to under up with as
    and or but if so
    """.split()
)


@dataclass(frozen=True)
class EntityScore:
    term: str
    score: float
    origin_fields: frozenset[str]


@dataclass
class TagCount:
    tag: str
    count: int


def rank_entities(results: ResultSet, records: list[EmailRecord], k: int) -> list[EntityScore]:
    """Top-k distinctive terms of the matched documents.

    Stoplisted terms and zero scores are dropped (a single-document subset
    therefore ranks nothing); ties break lexicographically.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    matched = [r for r in records if r.doc_id in results.doc_ids]
    if not matched:
        raise EmptyResults("no matched documents to rank")
    n = len(matched)
    total_tf: dict[str, int] = {}
    containing: dict[str, set[str]] = {}
    origins: dict[str, set[str]] = {}
    for record in matched:
        for fieldname in ("subject", "body"):
            for term in tokenize(getattr(record, fieldname)):
                if term in STOPWORDS:
                    continue
                total_tf[term] = total_tf.get(term, 0) + 1
                containing.setdefault(term, set()).add(record.doc_id)
                origins.setdefault(term, set()).add(fieldname)
    scored: list[EntityScore] = []
    for term, tf_sum in total_tf.items():
        df = len(containing[term])
        score = tf_sum * math.log(n / df)
        if score > 0:
            scored.append(EntityScore(term, score, frozenset(origins[term])))
    scored.sort(key=lambda e: (-e.score, e.term))
    return scored[:k]


class TagStore:
    """Global term -> tag-label sets, shared across every dataset.

    Append-only by design: there is no removal affordance, and assigning the
    same (term, tag) twice is a no-op.
    """

    def __init__(self, assignments: dict[str, set[str]] | None = None):
        self._assignments: dict[str, set[str]] = {
            t: set(tags) for t, tags in (assignments or {}).items()
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TagStore):
            return NotImplemented
        return self._assignments == other._assignments

    def assign(self, term: str, tag: str) -> None:
        label = (tag or "").strip()
        if not label:
            raise EmptyLabel("tag label must be non-empty")
        term = (term or "").strip().casefold()
        if not term or any(ch.isspace() for ch in term):
            raise ValueError(f"term must be a single token, got {term!r}")
        self._assignments.setdefault(term, set()).add(label)

    def lookup(self, term: str) -> set[str]:
        return set(self._assignments.get((term or "").strip().casefold(), set()))

    def distribution(self) -> list[TagCount]:
        """One count per label: how many terms carry it; sorted by count
        descending then label."""
        counts: dict[str, int] = {}
        for tags in self._assignments.values():
            for tag in tags:
                counts[tag] = counts.get(tag, 0) + 1
        return [TagCount(tag, counts[tag]) for tag in sorted(counts, key=lambda t: (-counts[t], t))]

    def total_assignments(self) -> int:
        return sum(len(tags) for tags in self._assignments.values())

    def terms(self) -> list[str]:
        return sorted(self._assignments)

    def to_json(self) -> dict[str, list[str]]:
        return {term: sorted(tags) for term, tags in sorted(self._assignments.items())}

    @classmethod
    def from_json(cls, obj: dict) -> "TagStore":
        return cls({term: set(tags) for term, tags in obj.items()})


def assign_tag(term: str, tag: str, store: TagStore) -> TagStore:
    store.assign(term, tag)
    return store


def lookup_tags(term: str, store: TagStore) -> set[str]:
    return store.lookup(term)


def tag_distribution(store: TagStore) -> list[TagCount]:
    return store.distribution()
