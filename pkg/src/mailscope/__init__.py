"""mailscope: investigative email analytics.

Progressively filter an email corpus and inspect coordinated views of who
(correspondents, contact graph), what (entities, clusters, tags), and when
(timeline), with every action logged and replayable.
"""

from .records import Address, DatasetHandle, EmailRecord, normalize_address
from .textindex import CorpusIndex, build_index, doc_vector, tfidf, tokenize
from .query import Filter, QueryStack, ResultSet, evaluate, make_filter, push_filter, remove_filter
from .analytics import correspondent_stats, timeline_bins
from .entities import TagStore, rank_entities
from .graph import ContactGraph, build_graph, remove_edge, remove_node, undo_removal
from .cluster import Clustering, cluster_heads, clusterize, members
from .ingest import ParseResult, load_dataset, parse_mbox, parse_tabular, synthesize_corpus
from .session import Session, replay
from .store import SessionState, Store

__version__ = "0.1.0"

__all__ = [
    "Address",
    "Clustering",
    "ContactGraph",
    "CorpusIndex",
    "DatasetHandle",
    "EmailRecord",
    "Filter",
    "ParseResult",
    "QueryStack",
    "ResultSet",
    "Session",
    "SessionState",
    "Store",
    "TagStore",
    "build_graph",
    "build_index",
    "cluster_heads",
    "clusterize",
    "correspondent_stats",
    "doc_vector",
    "evaluate",
    "load_dataset",
    "make_filter",
    "members",
    "normalize_address",
    "parse_mbox",
    "parse_tabular",
    "push_filter",
    "rank_entities",
    "remove_edge",
    "remove_filter",
    "remove_node",
    "replay",
    "synthesize_corpus",
    "tfidf",
    "timeline_bins",
    "tokenize",
    "undo_removal",
]
