"""Ingest an mbox and narrow it with a progressive, reversible filter stack.

Each added filter can only shrink the match set (pure conjunction), and
removing it restores exactly the previous result.
"""
from mailscope import Session, TagStore

from _corpus import build

store, handle, path = build()
print(f"ingested {handle.record_count} messages from {path.name} "
      f"as dataset {handle.dataset_id}")

session = Session.create(store, TagStore(), handle.dataset_id, persist=False)
print(f"\nno filters        -> {len(session.results().doc_ids)} matches")

f_money = session.add_filter("content", "money")
print(f"+ content:money   -> {len(session.results().doc_ids)} matches")

f_urgent = session.add_filter("content", "urgent")
print(f"+ content:urgent  -> {len(session.results().doc_ids)} matches")

session.add_filter("subject", "urgent")
print(f"+ subject:urgent  -> {len(session.results().doc_ids)} matches "
      f"(subject and content are separate fields)")

session.drop_filter(f_urgent.filter_id)
print(f"- content:urgent  -> {len(session.results().doc_ids)} matches")

# the whole investigation is in the downloadable action log
print("\naction log so far:")
for line in session.export_action_log().splitlines():
    print("  " + line)
