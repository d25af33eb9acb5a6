"""Surface distinctive terms in the filtered subset and externalize what
you learn as tags.

Entity scores are term-weight sums computed against the *matched* documents
only, so the ranking tracks the current query. Tags live in one global
store: anything tagged here is visible when any other dataset is open, and
survives restarts via tags.json.
"""
from mailscope import Session, rank_entities
from mailscope.ingest import register_dataset
from mailscope.records import Address, EmailRecord

from _corpus import build

store, handle, _ = build()
tags = store.load_tag_store()
session = Session.create(store, tags, handle.dataset_id, persist=False)

session.add_filter("content", "money")
results = session.results()
print(f"entities for content:money ({len(results.doc_ids)} matched docs):")
for e in rank_entities(results, session.records, k=8):
    fields = "+".join(sorted(e.origin_fields))
    print(f"  {e.term:<12} score={e.score:.4f}  ({fields})")

# tag what looks suspicious, politics-flavored terms separately
for term in ("urgent", "dollars", "money"):
    session.assign_tag(term, "suspicious")
for term in ("receipt", "officials", "goods"):
    session.assign_tag(term, "politics")

print("\ntag distribution (terms per tag):")
for tc in tags.distribution():
    print(f"  {tc.tag:<12} {'#' * tc.count} {tc.count}")

# a different dataset sees the same global tags
other = register_dataset(
    [EmailRecord("x1", Address("a@b.example"), [Address("c@d.example")],
                 subject="urgent receipt", body="the officials sent dollars")],
    store,
    label="another dataset",
)
other_session = Session.create(store, tags, other.dataset_id, persist=False)
print(f"\nunder dataset {other.dataset_id}:")
for term in ("urgent", "receipt", "never-tagged"):
    print(f"  tags for {term!r}: {sorted(other_session.tag_store.lookup(term)) or '{}'}")
