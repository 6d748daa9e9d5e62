"""Immutable inverted index with bitset postings.

Each term owns a document bitmask (arbitrary-precision int, one bit per
document ordinal), so disjunctive matching, document frequency and
pairwise co-occurrence counts reduce to bitwise ops. The fitness loop of
the evolutionary search performs on the order of population x generations
x k matchings, which is why sets are not materialized on the hot path.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Corpus


@dataclass
class InvertedIndex:
    doc_count: int
    doc_ids: list[str]
    labels: list[str | None]
    label_names: list[str]
    postings: dict[str, list[tuple[int, int]]]
    doc_terms: list[Counter]
    masks: dict[str, int] = field(repr=False, default_factory=dict)

    # -- core lookups ------------------------------------------------------

    def doc_freq(self, term: str) -> int:
        plist = self.postings.get(term)
        return len(plist) if plist else 0

    def term_mask(self, term: str) -> int:
        return self.masks.get(term, 0)

    def match_any(self, words) -> set[int]:
        """Document ordinals containing at least one of ``words``."""
        mask = 0
        for w in words:
            mask |= self.masks.get(w, 0)
        return mask_to_ordinals(mask)

    def match_any_mask(self, words) -> int:
        mask = 0
        for w in words:
            mask |= self.masks.get(w, 0)
        return mask

    def and_count(self, a: str, b: str) -> int:
        return (self.masks.get(a, 0) & self.masks.get(b, 0)).bit_count()

    def vocabulary(self) -> list[str]:
        return sorted(self.postings)

    def occurrence_count(self, term: str, ordinal: int) -> int:
        return self.doc_terms[ordinal].get(term, 0)


def build_index(corpus: Corpus) -> InvertedIndex:
    """Index a corpus; ordinals follow corpus document order."""
    if len(corpus) == 0:
        raise ValueError("cannot index an empty corpus")

    postings: dict[str, list[tuple[int, int]]] = {}
    masks: dict[str, int] = {}
    for ordinal, doc in enumerate(corpus.documents):
        bit = 1 << ordinal
        for term, count in doc.terms.items():
            if term in postings:
                postings[term].append((ordinal, count))
                masks[term] |= bit
            else:
                postings[term] = [(ordinal, count)]
                masks[term] = bit

    return InvertedIndex(
        doc_count=len(corpus),
        doc_ids=[d.id for d in corpus.documents],
        labels=[d.label for d in corpus.documents],
        label_names=list(corpus.label_names),
        postings=postings,
        doc_terms=[d.terms for d in corpus.documents],
        masks=masks,
    )


def mask_to_ordinals(mask: int) -> set[int]:
    out: set[int] = set()
    while mask:
        low = mask & -mask
        out.add(low.bit_length() - 1)
        mask ^= low
    return out


# -- optional dump/load artifact (JSON; schema in README) ------------------


def dump_index(index: InvertedIndex, path: str | Path) -> None:
    obj = {
        "doc_count": index.doc_count,
        "doc_ids": index.doc_ids,
        "labels": index.labels,
        "label_names": index.label_names,
        "postings": {t: [[o, c] for o, c in pl] for t, pl in index.postings.items()},
    }
    Path(path).write_text(json.dumps(obj, sort_keys=True), encoding="utf-8")


def load_index(path: str | Path) -> InvertedIndex:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    postings = {t: [(int(o), int(c)) for o, c in pl] for t, pl in obj["postings"].items()}
    doc_terms = [Counter() for _ in range(obj["doc_count"])]
    masks: dict[str, int] = {}
    for term, plist in postings.items():
        m = 0
        for ordinal, count in plist:
            doc_terms[ordinal][term] = count
            m |= 1 << ordinal
        masks[term] = m
    return InvertedIndex(
        doc_count=int(obj["doc_count"]),
        doc_ids=list(obj["doc_ids"]),
        labels=[None if x is None else str(x) for x in obj["labels"]],
        label_names=list(obj["label_names"]),
        postings=postings,
        doc_terms=doc_terms,
        masks=masks,
    )
