"""Canonical JSON payloads for every panel.

Both the HTTP service and the CLI emit these dictionaries unchanged, which
is what makes the two surfaces byte-comparable for the same logical
request. All orderings are deterministic.
"""
from __future__ import annotations

from .analytics import correspondent_stats, timeline_bins
from .cluster import Clustering
from .entities import rank_entities
from .graph import ContactGraph
from .records import DatasetHandle, EmailRecord
from .session import Session

DEFAULT_PAGE_SIZE = 50


def dataset_payload(handle: DatasetHandle) -> dict:
    return handle.to_json()


def session_payload(session: Session) -> dict:
    results = session.results()
    return {
        "session_id": session.session_id,
        "dataset_id": session.dataset_id,
        "fingerprint": results.stack_fingerprint,
        "filters": session.stack.to_json(),
        "match_count": len(results.doc_ids),
    }


def record_payload(record: EmailRecord) -> dict:
    return {
        "doc_id": record.doc_id,
        "sender": record.sender.to_json(),
        "recipients": [r.to_json() for r in record.recipients],
        "subject": record.subject,
        "body": record.body,
        "timestamp": record.timestamp.isoformat() if record.timestamp else None,
        "synthetic_body": record.synthetic_body,
    }


def _page_order(record: EmailRecord) -> tuple:
    # newest first, undated records at the end, doc_id as the tiebreak
    if record.timestamp is None:
        return (1, 0.0, record.doc_id)
    return (0, -record.timestamp.timestamp(), record.doc_id)


def results_page(session: Session, offset: int = 0, limit: int = DEFAULT_PAGE_SIZE) -> dict:
    results = session.results()
    matched = sorted(
        (r for r in session.records if r.doc_id in results.doc_ids),
        key=_page_order,
    )
    page = matched[offset : offset + limit]
    return {
        "fingerprint": results.stack_fingerprint,
        "total": len(matched),
        "offset": offset,
        "limit": limit,
        "records": [record_payload(r) for r in page],
    }


def correspondents_payload(session: Session) -> dict:
    results = session.results()
    stats = correspondent_stats(results, session.records)
    return {
        "fingerprint": results.stack_fingerprint,
        "correspondents": [
            {
                "address": st.address.canonical,
                "display_name": st.address.display_name,
                "sent": st.sent,
                "received": st.received,
                "total": st.total,
            }
            for st in stats
        ],
    }


def timeline_payload(session: Session, granularity: str) -> dict:
    results = session.results()
    bins = timeline_bins(results, session.records, granularity)
    return {
        "fingerprint": results.stack_fingerprint,
        "granularity": granularity,
        "bins": [{"bucket": b.bucket, "count": b.count} for b in bins],
    }


def entities_payload(session: Session, k: int) -> dict:
    results = session.results()
    scores = rank_entities(results, session.records, k)
    return {
        "fingerprint": results.stack_fingerprint,
        "k": k,
        "entities": [
            {
                "term": e.term,
                "score": e.score,
                "origin_fields": sorted(e.origin_fields),
                "tags": sorted(session.tag_store.lookup(e.term)),
            }
            for e in scores
        ],
    }


def graph_payload(session: Session) -> dict:
    g: ContactGraph = session.graph()
    return {
        "fingerprint": session.results().stack_fingerprint,
        "nodes": [
            {"address": canonical, "display_name": g.nodes[canonical].display_name}
            for canonical in sorted(g.nodes)
        ],
        "edges": [
            {
                "a": a,
                "b": b,
                "weight": g.edges[(a, b)].weight,
                "a_to_b": g.edges[(a, b)].forward,
                "b_to_a": g.edges[(a, b)].backward,
            }
            for a, b in sorted(g.edges)
        ],
        "undo_depth": len(g.deletion_stack),
    }


def cluster_payload(session: Session) -> dict:
    results = session.results()
    clustering: Clustering | None = session.clustering()
    if clustering is None:
        return {
            "fingerprint": results.stack_fingerprint,
            "clustered": False,
            "doc_ids": sorted(results.doc_ids),
        }
    return {
        "fingerprint": results.stack_fingerprint,
        "clustered": True,
        "k": clustering.k,
        "seed": clustering.seed,
        "objective": clustering.objective,
        "iterations": clustering.iterations_run,
        "converged": clustering.converged,
        "clusters": [
            {
                "index": i,
                "size": len(clustering.members(i)),
                "head": clustering.heads.get(i),
            }
            for i in range(clustering.k)
        ],
    }


def cluster_members_payload(session: Session, cluster_index: int) -> dict:
    clustering = session.clustering()
    if clustering is None:
        from .errors import EmptyResults

        raise EmptyResults("no clustering has been run for this session")
    return {
        "fingerprint": session.results().stack_fingerprint,
        "cluster": cluster_index,
        "head": clustering.heads.get(cluster_index),
        "members": clustering.members(cluster_index),
    }


def tag_assignment_payload(session: Session, term: str) -> dict:
    return {
        "term": term.strip().casefold(),
        "tags": sorted(session.tag_store.lookup(term)),
    }


def tag_distribution_payload(tag_store) -> dict:
    return {
        "tags": [{"tag": tc.tag, "count": tc.count} for tc in tag_store.distribution()]
    }
