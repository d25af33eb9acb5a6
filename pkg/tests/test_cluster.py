import itertools
import math
import random

import numpy as np
import pytest

from mailscope.cluster import cluster_heads, clusterize, members
from mailscope.errors import EmptyResults, IndexOutOfRange, InvalidK
from mailscope.query import QueryStack, ResultSet, evaluate
from mailscope.textindex import build_index, doc_vector

from conftest import make_record


def _setup(records):
    index = build_index(records)
    results = evaluate(QueryStack(""), index, records)
    return results, index


def _unit_vectors(doc_ids, index):
    vocab = sorted({t for d in doc_ids for t in doc_vector(d, index)})
    pos = {t: i for i, t in enumerate(vocab)}
    rows = {}
    for d in doc_ids:
        v = np.zeros(len(vocab))
        for term, w in doc_vector(d, index).items():
            v[pos[term]] = w
        norm = np.linalg.norm(v)
        rows[d] = v / norm if norm > 0 else v
    return rows


def partition_objective(groups, unit_rows):
    """Objective of an explicit partition: centroids are normalized means of
    the member unit vectors."""
    total = 0.0
    for group in groups:
        if not group:
            continue
        s = np.sum([unit_rows[d] for d in group], axis=0)
        norm = np.linalg.norm(s)
        centroid = s / norm if norm > 0 else s
        for d in group:
            total += 1.0 - float(unit_rows[d] @ centroid)
    return total


def best_partition_objective(doc_ids, index, k):
    """Exhaustive search over all assignments of docs to k groups."""
    unit_rows = _unit_vectors(doc_ids, index)
    best = math.inf
    for assignment in itertools.product(range(k), repeat=len(doc_ids)):
        groups = [[] for _ in range(k)]
        for d, g in zip(doc_ids, assignment):
            groups[g].append(d)
        best = min(best, partition_objective(groups, unit_rows))
    return best


SEPARATED = [
    make_record("d1", body="money transfer urgent"),
    make_record("d2", body="urgent money"),
    make_record("d3", body="meeting schedule agenda"),
    make_record("d4", body="agenda meeting"),
]


def test_k_one_single_cluster():
    results, index = _setup(SEPARATED)
    c = clusterize(results, index, k=1, seed=0)
    assert set(c.assignments.values()) == {0}
    assert c.heads[0] in c.members(0)
    assert cluster_heads(c) == [c.heads[0]]


def test_orthogonal_docs_k_equals_n():
    records = [
        make_record("d1", body="alpha alpha"),
        make_record("d2", body="beta beta"),
        make_record("d3", body="gamma gamma"),
        make_record("d4", body="delta delta"),
    ]
    results, index = _setup(records)
    c = clusterize(results, index, k=4, seed=3)
    assert sorted(len(c.members(i)) for i in range(4)) == [1, 1, 1, 1]
    assert c.objective == pytest.approx(0.0, abs=1e-9)


def test_separated_fixture_matches_exhaustive_oracle():
    results, index = _setup(SEPARATED)
    c = clusterize(results, index, k=2, seed=0)
    oracle = best_partition_objective(sorted(results.doc_ids), index, 2)
    assert c.objective == pytest.approx(oracle, abs=1e-9)
    first = {frozenset(c.members(i)) for i in range(2)}
    assert first == {frozenset({"d1", "d2"}), frozenset({"d3", "d4"})}


def test_invalid_k(five_docs):
    results, index = _setup(five_docs)
    with pytest.raises(InvalidK):
        clusterize(results, index, k=0, seed=0)
    with pytest.raises(InvalidK):
        clusterize(results, index, k=6, seed=0)


def test_empty_results(five_docs):
    index = build_index(five_docs)
    with pytest.raises(EmptyResults):
        clusterize(ResultSet(frozenset(), "", "0"), index, k=1, seed=0)


def test_partition_property():
    results, index = _setup(SEPARATED)
    c = clusterize(results, index, k=2, seed=1)
    union = sorted(d for i in range(2) for d in c.members(i))
    assert union == sorted(results.doc_ids)
    assert members(c, 0) == c.members(0)
    with pytest.raises(IndexOutOfRange):
        c.members(2)


def test_objective_history_non_increasing():
    results, index = _setup(SEPARATED)
    c = clusterize(results, index, k=2, seed=0)
    for earlier, later in zip(c.objective_history, c.objective_history[1:]):
        assert later <= earlier + 1e-12


def test_determinism_same_seed():
    results, index = _setup(SEPARATED)
    a = clusterize(results, index, k=2, seed=9)
    b = clusterize(results, index, k=2, seed=9)
    assert a == b


def test_zero_vector_docs_parked_in_cluster_zero():
    # "common" appears in every doc: idf 0 for d5's only token
    records = [
        make_record("d1", body="common money transfer"),
        make_record("d2", body="common money wire"),
        make_record("d3", body="common agenda meeting"),
        make_record("d4", body="common agenda schedule"),
        make_record("d5", body="common common"),
    ]
    results, index = _setup(records)
    assert doc_vector("d5", index) == {"common": 0.0}
    c = clusterize(results, index, k=2, seed=0)
    assert c.assignments["d5"] == 0


def test_single_doc_corpus_all_zero_vectors():
    records = [make_record("d1", body="only words here")]
    results, index = _setup(records)
    c = clusterize(results, index, k=1, seed=0)
    assert c.assignments == {"d1": 0}
    assert c.heads[0] == "d1"


def test_identical_vectors_head_is_lowest_doc_id():
    records = [
        make_record("d1", body="twin twin"),
        make_record("d2", body="twin twin"),
        make_record("d3", body="unrelated alpha"),
    ]
    results, index = _setup(records)
    c = clusterize(results, index, k=2, seed=0)
    twins = {d for d, g in c.assignments.items() if d in ("d1", "d2")}
    assert len({c.assignments["d1"], c.assignments["d2"]}) == 1
    head = c.heads[c.assignments["d1"]]
    assert head == "d1"  # tie broken toward the lowest doc_id


def test_fixed_point_at_convergence():
    rng = random.Random(2)
    words = ["money", "transfer", "urgent", "meeting", "agenda", "where"]
    records = [
        make_record(f"d{i}", body=" ".join(rng.choices(words, k=5))) for i in range(12)
    ]
    results, index = _setup(records)
    c = clusterize(results, index, k=3, seed=4)
    assert c.converged
    unit = _unit_vectors(sorted(results.doc_ids), index)
    centroids = []
    vocab = sorted({t for d in sorted(results.doc_ids) for t in doc_vector(d, index)})
    pos = {t: i for i, t in enumerate(vocab)}
    for cm in c.centroids:
        v = np.zeros(len(vocab))
        for term, w in cm.items():
            v[pos[term]] = w
        centroids.append(v)
    for d, assigned in c.assignments.items():
        sims = [float(unit[d] @ centroid) for centroid in centroids]
        assert sims[assigned] >= max(sims) - 1e-9
