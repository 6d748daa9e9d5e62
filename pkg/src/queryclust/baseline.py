"""k-means++ over capped tf-idf features, the comparison baseline.

Features are the highest-document-frequency terms (ties lexicographic),
weighted like the expansion vectors and row-normalized. Lloyd iterations
run until assignments stabilize; a cluster that empties is reseeded at the
point farthest from its previous centroid, so the output always has k
non-empty clusters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .clusters import ASSIGNED_BY_KNN, ClusterAssignment
from .expand import doc_matrix
from .index import InvertedIndex

DEFAULT_MAX_FEATURES = 1000
DEFAULT_MAX_ITERS = 300


@dataclass
class FeatureMatrix:
    matrix: sparse.csr_matrix  # rows follow corpus document order
    feature_terms: list[str]


def tfidf_matrix(index: InvertedIndex, max_features: int = DEFAULT_MAX_FEATURES) -> FeatureMatrix:
    """tf-idf matrix over the ``max_features`` highest-DF terms."""
    terms = sorted(index.postings, key=lambda t: (-index.doc_freq(t), t))[:max_features]
    mat, selected = doc_matrix(index, terms)
    return FeatureMatrix(matrix=mat, feature_terms=selected)


def kmeans_pp(
    matrix,
    k: int,
    seed: int,
    max_iters: int = DEFAULT_MAX_ITERS,
    wcss_trace: list | None = None,
) -> ClusterAssignment:
    """Seeded k-means++ (D^2 init) with Lloyd iterations.

    Accepts a dense array, a sparse matrix or a FeatureMatrix. Deterministic
    for a fixed seed. Pass a list as ``wcss_trace`` to collect the
    within-cluster sum of squares observed at each assignment step.
    """
    if isinstance(matrix, FeatureMatrix):
        matrix = matrix.matrix
    x = _as_dense(matrix)
    n = x.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of documents ({n})")

    rng = np.random.default_rng(seed)
    centroids = _init_plus_plus(x, k, rng)

    assignment = np.full(n, -1, dtype=np.int32)
    for _ in range(max_iters):
        d2 = _sq_distances(x, centroids)
        new_assignment = np.asarray(d2.argmin(axis=1), dtype=np.int32)
        if wcss_trace is not None:
            wcss_trace.append(float(d2[np.arange(n), new_assignment].sum()))

        for j in range(k):
            members = new_assignment == j
            if members.any():
                centroids[j] = x[members].mean(axis=0)
            else:
                # reseed at the point farthest from this cluster's centroid
                far = int(np.argmax(d2[:, j]))
                centroids[j] = x[far]
                new_assignment[far] = j

        if np.array_equal(new_assignment, assignment):
            break
        assignment = new_assignment

    return ClusterAssignment(
        assignment=assignment,
        cluster_count=k,
        assigned_by=np.full(n, ASSIGNED_BY_KNN, dtype=np.uint8),
    )


def inertia(matrix, assignment: ClusterAssignment) -> float:
    """Within-cluster sum of squared distances to centroids."""
    x = _as_dense(matrix.matrix if isinstance(matrix, FeatureMatrix) else matrix)
    total = 0.0
    for j in range(assignment.cluster_count):
        members = assignment.assignment == j
        if members.any():
            centroid = x[members].mean(axis=0)
            total += float(((x[members] - centroid) ** 2).sum())
    return total


def _as_dense(matrix) -> np.ndarray:
    if sparse.issparse(matrix):
        return np.asarray(matrix.todense(), dtype=np.float64)
    arr = np.asarray(matrix, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    return arr


def _init_plus_plus(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = x.shape[0]
    centroids = np.empty((k, x.shape[1]))
    first = int(rng.integers(n))
    centroids[0] = x[first]
    d2 = ((x - centroids[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            idx = int(rng.integers(n))  # all points coincide with a centroid
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centroids[j] = x[idx]
        d2 = np.minimum(d2, ((x - centroids[j]) ** 2).sum(axis=1))
    return centroids


def _sq_distances(x: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    xx = (x * x).sum(axis=1)[:, None]
    cc = (centroids * centroids).sum(axis=1)[None, :]
    return np.maximum(xx + cc - 2.0 * (x @ centroids.T), 0.0)
