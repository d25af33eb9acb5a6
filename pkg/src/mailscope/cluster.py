"""Content-similarity clustering of the filtered emails.

Spherical k-means over unit-normalized term-weight vectors: seeded
k-means++ picks the initial centers, Lloyd iterations alternate
assign-to-most-similar-centroid with normalized-mean centroid updates, and
the best of several restarts (lowest objective, earliest restart on ties)
wins. Documents whose vectors are all zero cannot be compared by cosine and
are parked in cluster 0.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyResults, IndexOutOfRange, InvalidK
from .query import ResultSet
from .textindex import CorpusIndex, doc_vector

DEFAULT_RESTARTS = 10
MAX_ITERATIONS = 100


@dataclass
class Clustering:
    k: int
    seed: int
    doc_ids: list[str]
    assignments: dict[str, int]
    centroids: list[dict[str, float]]
    heads: dict[int, str]
    objective: float
    iterations_run: int
    converged: bool
    restart_index: int
    objective_history: list[float] = field(default_factory=list)

    def members(self, cluster_index: int) -> list[str]:
        if not 0 <= cluster_index < self.k:
            raise IndexOutOfRange(f"cluster index {cluster_index} outside [0, {self.k})")
        return sorted(d for d, c in self.assignments.items() if c == cluster_index)

    def nonempty_clusters(self) -> list[int]:
        return sorted({c for c in self.assignments.values()})


def members(clustering: Clustering, cluster_index: int) -> list[str]:
    return clustering.members(cluster_index)


def cluster_heads(clustering: Clustering) -> list[str]:
    """Heads of the non-empty clusters, in cluster-index order."""
    return [clustering.heads[i] for i in clustering.nonempty_clusters()]


def _matrix(doc_ids: list[str], index: CorpusIndex) -> tuple[np.ndarray, list[int]]:
    """Unit-row matrix over the union vocabulary plus the rows that had a
    nonzero vector."""
    vectors = [doc_vector(d, index) for d in doc_ids]
    vocab = sorted({t for v in vectors for t in v})
    pos = {t: i for i, t in enumerate(vocab)}
    x = np.zeros((len(doc_ids), len(vocab)), dtype=np.float64)
    for row, vec in enumerate(vectors):
        for term, weight in vec.items():
            x[row, pos[term]] = weight
    norms = np.linalg.norm(x, axis=1)
    nonzero = [i for i, nv in enumerate(norms) if nv > 0.0]
    u = np.zeros_like(x)
    if nonzero:
        nz = np.array(nonzero)
        u[nz] = x[nz] / norms[nz, None]
    return u, nonzero


def _init_centroids(
    u: np.ndarray,
    nonzero: list[int],
    k: int,
    rng: random.Random,
) -> np.ndarray:
    """k-means++ seeding over the nonzero rows; surplus centroids (when
    distinct candidates run out) stay zero and simply attract nothing."""
    n_features = u.shape[1]
    centroids = np.zeros((k, n_features), dtype=np.float64)
    if not nonzero:
        return centroids
    m = min(k, len(nonzero))
    chosen: list[int] = [nonzero[rng.randrange(len(nonzero))]]
    while len(chosen) < m:
        cand = np.array(nonzero)
        sims = u[cand] @ u[chosen].T  # |cand| x |chosen|
        dist = 1.0 - sims.max(axis=1)
        dist[dist < 1e-12] = 0.0
        total = float(dist.sum())
        if total <= 0.0:
            remaining = [i for i in nonzero if i not in chosen]
            if not remaining:
                break
            chosen.append(remaining[rng.randrange(len(remaining))])
        else:
            pick = rng.choices(list(cand), weights=list(dist))[0]
            chosen.append(int(pick))
    centroids[: len(chosen)] = u[chosen]
    return centroids


def _assign(u: np.ndarray, centroids: np.ndarray, zero_rows: np.ndarray) -> np.ndarray:
    sims = u @ centroids.T
    assignments = np.argmax(sims, axis=1)  # ties go to the lowest index
    assignments[zero_rows] = 0
    return assignments


def _update(u: np.ndarray, assignments: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    out = centroids.copy()
    for j in range(centroids.shape[0]):
        member_rows = u[assignments == j]
        if member_rows.shape[0] == 0:
            continue
        total = member_rows.sum(axis=0)
        norm = np.linalg.norm(total)
        if norm > 0.0:
            out[j] = total / norm
    return out


def _objective(u: np.ndarray, assignments: np.ndarray, centroids: np.ndarray) -> float:
    sims = np.einsum("ij,ij->i", u, centroids[assignments])
    return float(np.sum(1.0 - sims))


def _lloyd(
    u: np.ndarray,
    nonzero: list[int],
    k: int,
    rng: random.Random,
    max_iterations: int,
) -> tuple[np.ndarray, np.ndarray, list[float], bool]:
    zero_rows = np.array([i for i in range(u.shape[0]) if i not in set(nonzero)], dtype=int)
    centroids = _init_centroids(u, nonzero, k, rng)
    assignments: np.ndarray | None = None
    history: list[float] = []
    converged = False
    for _ in range(max_iterations):
        new_assignments = _assign(u, centroids, zero_rows)
        if assignments is not None and np.array_equal(new_assignments, assignments):
            converged = True
            break
        assignments = new_assignments
        centroids = _update(u, assignments, centroids)
        history.append(_objective(u, assignments, centroids))
    return assignments, centroids, history, converged


def clusterize(
    results: ResultSet,
    index: CorpusIndex,
    k: int,
    seed: int,
    restarts: int = DEFAULT_RESTARTS,
    max_iterations: int = MAX_ITERATIONS,
) -> Clustering:
    """Deterministically cluster the matched documents into k groups."""
    doc_ids = sorted(results.doc_ids)
    if not doc_ids:
        raise EmptyResults("nothing to cluster")
    if not 1 <= k <= len(doc_ids):
        raise InvalidK(f"k must be in [1, {len(doc_ids)}], got {k}")

    u, nonzero = _matrix(doc_ids, index)
    best: tuple[float, int, tuple] | None = None
    for r in range(restarts):
        rng = random.Random(seed * 1_000_003 + r)
        assignments, centroids, history, converged = _lloyd(
            u, nonzero, k, rng, max_iterations
        )
        objective = history[-1] if history else _objective(
            u, assignments, centroids
        )
        if best is None or objective < best[0]:
            best = (objective, r, (assignments, centroids, history, converged))

    objective, restart_index, (assignments, centroids, history, converged) = best
    vocab = _vocab_of(doc_ids, index)
    centroid_maps = [_sparse(centroids[j], vocab) for j in range(k)]
    assign_map = {doc_ids[i]: int(assignments[i]) for i in range(len(doc_ids))}
    heads = _heads(u, assignments, centroids, doc_ids)
    return Clustering(
        k=k,
        seed=seed,
        doc_ids=doc_ids,
        assignments=assign_map,
        centroids=centroid_maps,
        heads=heads,
        objective=objective,
        iterations_run=len(history),
        converged=converged,
        restart_index=restart_index,
        objective_history=history,
    )


def _vocab_of(doc_ids: list[str], index: CorpusIndex) -> list[str]:
    return sorted({t for d in doc_ids for t in doc_vector(d, index)})


def _sparse(row: np.ndarray, vocab: list[str]) -> dict[str, float]:
    return {vocab[i]: float(w) for i, w in enumerate(row) if w != 0.0}


def _heads(
    u: np.ndarray,
    assignments: np.ndarray,
    centroids: np.ndarray,
    doc_ids: list[str],
) -> dict[int, str]:
    """Medoid by cosine-to-centroid per non-empty cluster; ties break toward
    the lowest doc_id (rows are already in doc_id order)."""
    sims = np.einsum("ij,ij->i", u, centroids[assignments])
    heads: dict[int, str] = {}
    best: dict[int, float] = {}
    for row in range(len(doc_ids)):
        cluster = int(assignments[row])
        sim = float(sims[row])
        if cluster not in heads or sim > best[cluster]:
            heads[cluster] = doc_ids[row]
            best[cluster] = sim
    return heads
