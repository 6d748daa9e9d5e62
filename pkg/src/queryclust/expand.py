"""KNN expansion of a partial clustering to full coverage.

Documents are represented as L2-normalized tf-idf vectors
(weight = #(t,d) * ln(1 + |D|/DF(t))); each unassigned document receives
the majority cluster among its K nearest assigned documents by Euclidean
distance. Seed members never change cluster.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import sparse

from .clusters import ASSIGNED_BY_KNN, ClusterAssignment
from .index import InvertedIndex

DEFAULT_KNN_K = 10


def vectorize(index: InvertedIndex, ordinal: int) -> dict[str, float]:
    """Sparse L2-normalized tf-idf vector of one document."""
    if not 0 <= ordinal < index.doc_count:
        raise ValueError(f"document ordinal out of range: {ordinal}")
    terms = index.doc_terms[ordinal]
    if not terms:
        return {}
    raw = {
        t: count * math.log(1.0 + index.doc_count / index.doc_freq(t))
        for t, count in terms.items()
    }
    norm = math.sqrt(sum(w * w for w in raw.values()))
    if norm == 0.0:
        return {t: 0.0 for t in raw}
    return {t: w / norm for t, w in raw.items()}


def doc_matrix(index: InvertedIndex, terms: list[str] | None = None) -> tuple[sparse.csr_matrix, list[str]]:
    """Row-normalized tf-idf matrix over ``terms`` (full vocabulary when None).

    Rows follow document ordinals; zero rows are kept for documents with
    none of the selected terms. DF always comes from the full index.
    """
    if terms is None:
        terms = index.vocabulary()
    col = {t: j for j, t in enumerate(terms)}
    n = index.doc_count
    data: list[float] = []
    rows: list[int] = []
    cols: list[int] = []
    for t in terms:
        plist = index.postings.get(t)
        if not plist:
            continue
        idf = math.log(1.0 + n / len(plist))
        j = col[t]
        for ordinal, count in plist:
            rows.append(ordinal)
            cols.append(j)
            data.append(count * idf)
    mat = sparse.csr_matrix((data, (rows, cols)), shape=(n, len(terms)))
    norms = np.sqrt(np.asarray(mat.multiply(mat).sum(axis=1)).ravel())
    scale = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
    mat = sparse.diags(scale) @ mat
    return mat.tocsr(), list(terms)


def knn_expand(
    index: InvertedIndex,
    seeds: ClusterAssignment,
    k: int = DEFAULT_KNN_K,
    matrix: sparse.csr_matrix | None = None,
) -> ClusterAssignment:
    """Total assignment extending ``seeds``; seed labels are preserved.

    Ties: equal distances rank by lower document ordinal; equal vote counts
    go to the tied cluster whose nearest member sorts first.
    """
    assigned = seeds.assigned_ordinals()
    if assigned.size == 0:
        raise ValueError("cannot expand: no assigned seed documents")
    unassigned = seeds.unassigned_ordinals()
    result = seeds.assignment.copy()
    by = seeds.assigned_by.copy()
    if unassigned.size == 0:
        return ClusterAssignment(assignment=result, cluster_count=seeds.cluster_count, assigned_by=by)

    mat = doc_matrix(index)[0] if matrix is None else matrix
    a_mat = mat[assigned]
    u_mat = mat[unassigned]
    a_norms = np.asarray(a_mat.multiply(a_mat).sum(axis=1)).ravel()
    u_norms = np.asarray(u_mat.multiply(u_mat).sum(axis=1)).ravel()
    sims = (u_mat @ a_mat.T).toarray()
    d2 = u_norms[:, None] + a_norms[None, :] - 2.0 * sims

    a_labels = seeds.assignment[assigned]
    kk = min(k, assigned.size)
    for row in range(unassigned.size):
        order = np.lexsort((assigned, d2[row]))[:kk]
        votes = a_labels[order]
        counts = np.bincount(votes, minlength=seeds.cluster_count)
        best = counts.max()
        winner = -1
        for v in votes:  # nearest-first; first tied cluster wins
            if counts[v] == best:
                winner = int(v)
                break
        result[unassigned[row]] = winner
        by[unassigned[row]] = ASSIGNED_BY_KNN

    return ClusterAssignment(assignment=result, cluster_count=seeds.cluster_count, assigned_by=by)
