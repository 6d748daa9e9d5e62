"""External cluster validation: V-measure, adjusted Rand index, count error.

All measures are computed from a class-by-cluster contingency table.
Entropies use natural logarithms (the base cancels in the homogeneity and
completeness ratios); the ARI uses exact integer pair counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .clusters import ClusterAssignment


@dataclass(frozen=True)
class ContingencyTable:
    """counts[i][j] = documents of class i assigned to cluster j."""

    counts: np.ndarray  # int64, shape (s, k)
    class_names: tuple[str, ...]

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)


@dataclass(frozen=True)
class ValidationScores:
    h: float
    c: float
    v: float
    ari: float
    count_error: int
    beta: float = 1.0


def contingency(
    assignment: ClusterAssignment,
    labels: list[str | None],
    label_names: list[str] | None = None,
) -> ContingencyTable:
    """Table over the assigned documents only (unassigned are excluded,
    which is what makes pre-expansion scoring possible). Empty clusters
    keep their zero columns."""
    if label_names is None:
        seen: dict[str, None] = {}
        for lab in labels:
            if lab is not None and lab not in seen:
                seen[lab] = None
        label_names = list(seen)
    if not label_names:
        raise ValueError("corpus has no labels; cannot validate")
    row = {name: i for i, name in enumerate(label_names)}
    k = max(assignment.cluster_count, 1)
    counts = np.zeros((len(label_names), k), dtype=np.int64)
    for ordinal in assignment.assigned_ordinals():
        lab = labels[ordinal]
        if lab is None:
            raise ValueError(f"assigned document {ordinal} has no label")
        counts[row[lab], assignment.assignment[ordinal]] += 1
    return ContingencyTable(counts=counts, class_names=tuple(label_names))


def _conditional_entropy(counts: np.ndarray, cond_sums: np.ndarray, n: int) -> float:
    # H(rows | cols) when cond_sums are column sums; 0*ln(0) terms are 0.
    h = 0.0
    for i in range(counts.shape[0]):
        for j in range(counts.shape[1]):
            nij = counts[i, j]
            if nij:
                h -= (nij / n) * math.log(nij / cond_sums[j])
    return h


def _entropy(sums: np.ndarray, n: int) -> float:
    h = 0.0
    for s in sums:
        if s:
            h -= (s / n) * math.log(s / n)
    return h


def v_measure(table: ContingencyTable, beta: float = 1.0) -> tuple[float, float, float]:
    """(homogeneity, completeness, v). v = (1+beta)hc / (beta*h + c)."""
    n = table.n
    if n < 1:
        raise ValueError("empty contingency table")
    counts = table.counts
    row_sums = table.row_sums
    col_sums = table.col_sums

    h_c = _entropy(row_sums, n)
    h_k = _entropy(col_sums, n)
    h_c_given_k = _conditional_entropy(counts, col_sums, n)
    h_k_given_c = _conditional_entropy(counts.T, row_sums, n)

    h = 1.0 if h_c == 0.0 else 1.0 - h_c_given_k / h_c
    c = 1.0 if h_k == 0.0 else 1.0 - h_k_given_c / h_k
    if h + c == 0.0:
        v = 0.0
    else:
        v = (1.0 + beta) * h * c / (beta * h + c)
    return h, c, v


def adjusted_rand_index(table: ContingencyTable) -> float:
    """Pair-counting ARI in [-1, 1]; 1.0 when max index equals expected index."""
    n = table.n
    if n < 2:
        raise ValueError("ARI needs at least two documents")

    def comb2(x: int) -> int:
        return x * (x - 1) // 2

    idx = int(sum(comb2(int(v)) for v in table.counts.ravel()))
    a = int(sum(comb2(int(v)) for v in table.row_sums))
    b = int(sum(comb2(int(v)) for v in table.col_sums))
    total = comb2(n)
    # ARI = (idx - a*b/total) / ((a+b)/2 - a*b/total), exactly
    numer = Fraction(idx) - Fraction(a * b, total)
    denom = Fraction(a + b, 2) - Fraction(a * b, total)
    if denom == 0:
        return 1.0
    return float(numer / denom)


def cluster_count_error(assignment: ClusterAssignment, labels: list[str | None]) -> int:
    """| non-empty clusters - ground-truth classes |."""
    s = len({lab for lab in labels if lab is not None})
    if s == 0:
        raise ValueError("corpus has no labels; cannot validate")
    return abs(assignment.non_empty_cluster_count() - s)


def score_assignment(
    assignment: ClusterAssignment,
    labels: list[str | None],
    label_names: list[str] | None = None,
    beta: float = 1.0,
) -> ValidationScores:
    table = contingency(assignment, labels, label_names)
    h, c, v = v_measure(table, beta)
    ari = adjusted_rand_index(table) if table.n >= 2 else 1.0
    return ValidationScores(
        h=h,
        c=c,
        v=v,
        ari=ari,
        count_error=cluster_count_error(assignment, labels),
        beta=beta,
    )
