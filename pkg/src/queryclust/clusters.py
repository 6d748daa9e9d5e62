"""Cluster assignments: partial or total maps from document ordinal to cluster."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

UNASSIGNED = -1

ASSIGNED_BY_NONE = 0
ASSIGNED_BY_QUERY = 1
ASSIGNED_BY_KNN = 2

_ASSIGNED_BY_NAMES = {ASSIGNED_BY_NONE: "", ASSIGNED_BY_QUERY: "query", ASSIGNED_BY_KNN: "knn"}


@dataclass
class ClusterAssignment:
    """cluster index per document ordinal, UNASSIGNED (-1) where absent."""

    assignment: np.ndarray  # int32, shape (doc_count,)
    cluster_count: int
    assigned_by: np.ndarray | None = None  # uint8, same shape

    def __post_init__(self):
        self.assignment = np.asarray(self.assignment, dtype=np.int32)
        if self.assigned_by is None:
            by = np.zeros(len(self.assignment), dtype=np.uint8)
            by[self.assignment >= 0] = ASSIGNED_BY_QUERY
            self.assigned_by = by
        bad = self.assignment[self.assignment >= 0]
        if bad.size and int(bad.max()) >= self.cluster_count:
            raise ValueError("assigned cluster index out of range")

    @property
    def doc_count(self) -> int:
        return len(self.assignment)

    def assigned_ordinals(self) -> np.ndarray:
        return np.flatnonzero(self.assignment >= 0)

    def unassigned_ordinals(self) -> np.ndarray:
        return np.flatnonzero(self.assignment < 0)

    def assigned_count(self) -> int:
        return int((self.assignment >= 0).sum())

    def is_total(self) -> bool:
        return bool((self.assignment >= 0).all())

    def coverage(self) -> float:
        return self.assigned_count() / len(self.assignment) if len(self.assignment) else 0.0

    def non_empty_cluster_count(self) -> int:
        vals = self.assignment[self.assignment >= 0]
        return int(np.unique(vals).size)

    def cluster_members(self, j: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == j)


def assignment_csv_rows(
    assignment: ClusterAssignment, doc_ids: list[str], labels: list[str | None]
) -> list[tuple[str, str, int, str]]:
    """(docId, label, clusterIndex, assignedBy) rows; -1 marks unassigned."""
    rows = []
    for i, doc_id in enumerate(doc_ids):
        c = int(assignment.assignment[i])
        by = _ASSIGNED_BY_NAMES[int(assignment.assigned_by[i])]
        rows.append((doc_id, labels[i] or "", c, by))
    return rows


def write_assignment_csv(
    assignment: ClusterAssignment, doc_ids: list[str], labels: list[str | None], path: str | Path
) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["docId", "label", "clusterIndex", "assignedBy"])
        w.writerows(assignment_csv_rows(assignment, doc_ids, labels))


def read_assignment_csv(path: str | Path) -> tuple[list[str], list[str | None], np.ndarray]:
    """Returns (doc_ids, labels, cluster_indices) from an assignment CSV."""
    doc_ids: list[str] = []
    labels: list[str | None] = []
    clusters: list[int] = []
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"docId", "clusterIndex"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"{path}: assignment CSV needs columns {sorted(required)}")
        for row in reader:
            doc_ids.append(row["docId"])
            labels.append(row.get("label") or None)
            clusters.append(int(row["clusterIndex"]))
    return doc_ids, labels, np.array(clusters, dtype=np.int32)
