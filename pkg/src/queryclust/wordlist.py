"""Candidate word list: modified tf-idf scoring and top-N selection.

The rank key for a term t is computed in log space to avoid overflowing
the underlying product form

    sqrt( prod over docs d containing t of  #(t,d) * |2 - IDF(t)| )

with IDF(t) = ln(1 + |D| / DF(t)). The monotone transform used here is

    S(t) = sum over d containing t of [ ln #(t,d) + ln |2 - IDF(t)| ]

which preserves the ranking (sqrt and exp are strictly increasing). A term
whose |2 - IDF| factor is exactly zero scores -inf and can never be
selected. Once built the list is fixed for the whole evolutionary run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .index import InvertedIndex


@dataclass(frozen=True)
class WordList:
    """Terms ordered by non-increasing score; index position is the gene value."""

    entries: tuple[tuple[str, float], ...]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def terms(self) -> tuple[str, ...]:
        return tuple(t for t, _ in self.entries)

    def term(self, i: int) -> str:
        return self.entries[i][0]


def term_score(index: InvertedIndex, term: str) -> float:
    """Log-space rank key S(t); requires the term to occur in the index."""
    plist = index.postings.get(term)
    if not plist:
        raise KeyError(f"term not in index: {term!r}")
    df = len(plist)
    idf = math.log(1.0 + index.doc_count / df)
    factor = abs(2.0 - idf)
    if factor == 0.0:
        return float("-inf")
    log_factor = math.log(factor)
    s = 0.0
    for _, count in plist:
        s += math.log(count) + log_factor
    return s


def build_wordlist(index: InvertedIndex, size: int = 100) -> WordList:
    """Score every indexed term and keep the ``size`` best.

    Ties break lexicographically so the list is deterministic; if the
    vocabulary is smaller than ``size`` every term is kept.
    """
    scored = [(term, term_score(index, term)) for term in index.postings]
    scored.sort(key=lambda e: (-e[1], e[0]))
    return WordList(entries=tuple(scored[:size]))


def wordlist_csv_rows(wl: WordList) -> list[tuple[str, float, int]]:
    """(term, score, rank) rows for the CLI dump."""
    return [(term, score, rank) for rank, (term, score) in enumerate(wl.entries)]
