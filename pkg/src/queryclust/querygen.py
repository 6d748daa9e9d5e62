"""Decoding integer genomes into sets of disjunctive word queries.

Gene i is a candidate for query (i mod k). Candidates are processed in
genome order; the first surviving word of a query becomes its root, and a
later candidate joins a query only if at least ``intersect_threshold`` of
its documents also contain the root. A word can be placed in at most one
query across the whole set; queries that never receive a word stay empty.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .index import InvertedIndex
from .wordlist import WordList

K_MIN_DEFAULT = 2
K_MAX_DEFAULT = 9


@dataclass(frozen=True)
class DecodeConfig:
    intersect_threshold: float = 0.5
    k_mode: str = "discovered"  # "fixed" | "discovered"
    fixed_k: int | None = None
    k_min: int = K_MIN_DEFAULT
    k_max: int = K_MAX_DEFAULT
    max_words_per_query: int = 4

    def __post_init__(self):
        if not 0.0 <= self.intersect_threshold <= 1.0:
            raise ValueError("intersect_threshold must be in [0, 1]")
        if self.k_mode not in ("fixed", "discovered"):
            raise ValueError(f"unknown k_mode {self.k_mode!r}")
        if self.k_mode == "fixed" and (self.fixed_k is None or self.fixed_k < 1):
            raise ValueError("fixed k_mode requires fixed_k >= 1")
        if self.k_min < 2 or self.k_max < self.k_min:
            raise ValueError("need 2 <= k_min <= k_max")

    @property
    def has_k_gene(self) -> bool:
        return self.k_mode == "discovered"

    def word_gene_count(self) -> int:
        k = self.k_max if self.k_mode == "discovered" else int(self.fixed_k)
        return k * self.max_words_per_query

    def genome_length(self) -> int:
        return self.word_gene_count() + (1 if self.has_k_gene else 0)


@dataclass(frozen=True)
class Chromosome:
    """Integer genome: optional k gene followed by word genes."""

    word_genes: tuple[int, ...]
    k_gene: int | None = None

    @classmethod
    def from_genome(cls, genome, config: DecodeConfig) -> "Chromosome":
        genome = [int(g) for g in genome]
        if config.has_k_gene:
            return cls(word_genes=tuple(genome[1:]), k_gene=genome[0])
        return cls(word_genes=tuple(genome), k_gene=None)

    def genome(self) -> list[int]:
        if self.k_gene is not None:
            return [self.k_gene, *self.word_genes]
        return list(self.word_genes)


@dataclass(frozen=True)
class Query:
    root_word: str
    extra_words: tuple[str, ...] = ()

    @property
    def words(self) -> tuple[str, ...]:
        return (self.root_word, *self.extra_words)

    def __str__(self) -> str:
        return " OR ".join(self.words)


@dataclass(frozen=True)
class QuerySet:
    declared_k: int
    queries: tuple[Query | None, ...]

    def non_empty(self) -> list[Query]:
        return [q for q in self.queries if q is not None]

    def cluster_count(self) -> int:
        return sum(1 for q in self.queries if q is not None)

    def to_text(self) -> str:
        """One line per non-empty query, root word first."""
        lines = []
        for i, q in enumerate(qq for qq in self.queries if qq is not None):
            lines.append(f"cluster {i}: {q}")
        return "\n".join(lines)


def intersect_ratio(index: InvertedIndex, root_word: str, new_word: str) -> float:
    """Fraction of new_word's documents that also contain root_word.

    Undefined (0.0 here, matching caller convention) when new_word is not
    in the index.
    """
    df = index.doc_freq(new_word)
    if df == 0:
        return 0.0
    return index.and_count(root_word, new_word) / df


class DecodeContext:
    """Precomputed per-(index, wordlist) tables for fast repeated decoding.

    Holds the term bitmasks and the full pairwise intersect-ratio matrix of
    the word list (at most 100x100), so one decode costs only integer ops.
    """

    def __init__(self, index: InvertedIndex, wordlist: WordList):
        self.index = index
        self.wordlist = wordlist
        self.terms = list(wordlist.terms)
        self.size = len(self.terms)
        if self.size == 0:
            raise ValueError("word list is empty")
        self.term_masks = [index.term_mask(t) for t in self.terms]
        dfs = np.array([max(index.doc_freq(t), 1) for t in self.terms], dtype=np.int64)
        ratios = np.empty((self.size, self.size), dtype=np.float64)
        for i, mi in enumerate(self.term_masks):
            for j, mj in enumerate(self.term_masks):
                ratios[i, j] = (mi & mj).bit_count() / dfs[j]
        self.ratio = ratios  # ratio[root, new]

    def decode_word_indices(self, genome, config: DecodeConfig) -> list[list[int]]:
        """Decode to per-query wordlist indices (root first); [] = empty slot.

        Only a word's first genome occurrence is processed; repeats are
        skipped even when the first occurrence failed its intersect test
        (this is what makes admission anti-monotone in the threshold).
        """
        if config.has_k_gene:
            k = int(genome[0])
            word_genes = genome[1:]
        else:
            k = int(config.fixed_k)
            word_genes = genome
        threshold = config.intersect_threshold
        size = self.size
        ratio = self.ratio
        queries: list[list[int]] = [[] for _ in range(k)]
        seen: set[int] = set()
        for pos, gene in enumerate(word_genes):
            widx = int(gene) % size
            if widx in seen:
                continue
            seen.add(widx)
            q = queries[pos % k]
            if not q or ratio[q[0], widx] >= threshold:
                q.append(widx)
        return queries

    def query_masks(self, word_indices: list[list[int]]) -> list[int]:
        masks = []
        for q in word_indices:
            m = 0
            for widx in q:
                m |= self.term_masks[widx]
            masks.append(m)
        return masks

    def to_query_set(self, word_indices: list[list[int]]) -> QuerySet:
        queries: list[Query | None] = []
        for q in word_indices:
            if not q:
                queries.append(None)
            else:
                queries.append(
                    Query(
                        root_word=self.terms[q[0]],
                        extra_words=tuple(self.terms[w] for w in q[1:]),
                    )
                )
        return QuerySet(declared_k=len(word_indices), queries=tuple(queries))


def decode(
    chromosome: Chromosome,
    wordlist: WordList,
    index: InvertedIndex,
    config: DecodeConfig,
    context: DecodeContext | None = None,
) -> QuerySet:
    """Pure decode of a chromosome into its query set."""
    if config.has_k_gene and chromosome.k_gene is None:
        raise ValueError("discovered k_mode requires a k gene")
    if not config.has_k_gene and chromosome.k_gene is not None:
        raise ValueError("fixed k_mode forbids a k gene")
    ctx = context if context is not None else DecodeContext(index, wordlist)
    return ctx.to_query_set(ctx.decode_word_indices(chromosome.genome(), config))
