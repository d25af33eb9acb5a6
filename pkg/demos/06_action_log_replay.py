"""Download the action log, replay it, get the same session back.

Every mutation appends to an append-only JSON-lines log. Replaying that
log against the same dataset reproduces the filter stack, graph edits,
clustering, and therefore every panel payload.
"""
import json

from mailscope import Session, TagStore
from mailscope.actions import ActionLog
from mailscope.session import replay
from mailscope import payloads

from _corpus import build

store, handle, _ = build()
tags = TagStore()

session = Session.create(store, tags, handle.dataset_id, persist=False)
session.add_filter("content", "money")
session.assign_tag("urgent", "suspicious")
node = sorted(session.graph().nodes)[0]
session.remove_graph_node(node)
session.run_clusterize(k=2, seed=7)

exported = session.export_action_log()
print("exported log:")
for line in exported.splitlines():
    print("  " + line)

clone = replay(ActionLog.from_jsonl(exported), handle.dataset_id, store, tags)

originals = {
    "fingerprint": session.results().stack_fingerprint,
    "correspondents": payloads.correspondents_payload(session),
    "graph": payloads.graph_payload(session),
    "cluster": payloads.cluster_payload(session),
}
replayed = {
    "fingerprint": clone.results().stack_fingerprint,
    "correspondents": payloads.correspondents_payload(clone),
    "graph": payloads.graph_payload(clone),
    "cluster": payloads.cluster_payload(clone),
}
for key in originals:
    same = json.dumps(originals[key], sort_keys=True) == json.dumps(replayed[key], sort_keys=True)
    print(f"{key:<16} identical after replay: {same}")
