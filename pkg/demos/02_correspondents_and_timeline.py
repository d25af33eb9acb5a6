"""Who talks to whom, and when: correspondent ranking plus calendar bins.

The busiest correspondent floats to the top, which is how an analyst spots
the likely spammer at a glance; the timeline buckets the same filtered set
by day, month, or year.
"""
from mailscope import Session, TagStore, correspondent_stats, timeline_bins

from _corpus import build

store, handle, _ = build()
session = Session.create(store, TagStore(), handle.dataset_id, persist=False)

results = session.results()
print("correspondents (total = sent + received, descending):")
for stat in correspondent_stats(results, session.records):
    name = f" ({stat.address.display_name})" if stat.address.display_name else ""
    print(f"  {stat.address.canonical:<28}{name:<18} "
          f"sent={stat.sent} received={stat.received} total={stat.total}")

for granularity in ("year", "month", "day"):
    bins = timeline_bins(results, session.records, granularity)
    print(f"\ntimeline by {granularity} "
          f"(dated messages only, empty buckets omitted):")
    for b in bins:
        print(f"  {b.bucket:<10} {'#' * b.count} {b.count}")
