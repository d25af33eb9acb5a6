"""Prune the contact graph to isolate a sub-network, then walk it back.

Removals stack up and undo in LIFO order; undoing a node removal also
reinstates every edge it took with it. Edits never touch the underlying
records, only this view.
"""
from mailscope import Session, TagStore
from mailscope.graph import to_dot

from _corpus import build


def show(g, label):
    print(f"{label}: {len(g.nodes)} nodes, {len(g.edges)} edges, "
          f"undo depth {len(g.deletion_stack)}")
    for (a, b), counts in sorted(g.edges.items()):
        print(f"    {a} -- {b}  weight={counts.weight} "
              f"({counts.forward}->, <-{counts.backward})")


store, handle, _ = build()
session = Session.create(store, TagStore(), handle.dataset_id, persist=False)

g = session.graph()
show(g, "full graph")

# drop the office chatter to focus on the scam sub-network
session.remove_graph_node("agnes@office.example")
session.remove_graph_node("bernard@office.example")
show(session.graph(), "\nafter removing two office nodes")

session.undo_graph_removal()
show(session.graph(), "\nafter one undo (bernard is back, edges restored)")

session.undo_graph_removal()
show(session.graph(), "\nafter undoing everything")

print("\nDOT export of the pruned view:")
session.remove_graph_node("carla@office.example")
print(to_dot(session.graph()))
