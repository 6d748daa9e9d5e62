from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from queryclust.index import build_index
from queryclust.querygen import (
    Chromosome,
    DecodeConfig,
    DecodeContext,
    QuerySet,
    decode,
    intersect_ratio,
)
from queryclust.wordlist import WordList

from conftest import corpus_from_term_lists


def test_intersect_ratio_examples(toy_index):
    assert intersect_ratio(toy_index, "space", "nasa") == 1.0
    assert intersect_ratio(toy_index, "space", "orbit") == 0.5
    assert intersect_ratio(toy_index, "game", "game") == 1.0
    assert intersect_ratio(toy_index, "space", "zzz") == 0.0  # unseen word


@pytest.fixture(scope="module")
def worked_example():
    """Eight-word list over a corpus where orbit/nasa nest inside space,
    hockey nests inside game, but orbit-game and file-god do not."""
    corpus = corpus_from_term_lists(
        {
            "d0": ["space", "orbit", "nasa"],
            "d1": ["space", "nasa"],
            "d2": ["space", "orbit"],
            "d3": ["god"],
            "d4": ["file", "sale"],
            "d5": ["game", "hockey"],
            "d6": ["game", "hockey"],
            "d7": ["game", "orbit"],
        }
    )
    index = build_index(corpus)
    wl = WordList(
        entries=tuple(
            (t, float(-i)) for i, t in enumerate(
                ["space", "nasa", "god", "orbit", "hockey", "file", "sale", "game"]
            )
        )
    )
    return index, wl


def test_worked_decode(worked_example):
    index, wl = worked_example
    config = DecodeConfig(k_mode="discovered")
    chrom = Chromosome(k_gene=3, word_genes=(0, 7, 2, 3, 3, 5, 1, 4, 2))
    qs = decode(chrom, wl, index, config)
    assert qs.declared_k == 3
    texts = [None if q is None else str(q) for q in qs.queries]
    assert texts == ["space OR orbit OR nasa", "game OR hockey", "god"]
    assert qs.queries[0].root_word == "space"


def test_all_genes_equal(worked_example):
    index, wl = worked_example
    config = DecodeConfig(k_mode="discovered")
    chrom = Chromosome(k_gene=4, word_genes=(2,) * 9)
    qs = decode(chrom, wl, index, config)
    assert str(qs.queries[0]) == "god"
    assert qs.queries[1] is None and qs.queries[2] is None and qs.queries[3] is None


def test_threshold_one_single_word_queries(worked_example):
    index, wl = worked_example
    # drop fully nested pairs by removing nasa/hockey from the genome
    config = DecodeConfig(k_mode="fixed", fixed_k=2, intersect_threshold=1.0)
    chrom = Chromosome(word_genes=(0, 7, 3, 5, 6, 2, 3, 5))
    qs = decode(chrom, wl, index, config)
    for q in qs.non_empty():
        assert len(q.words) == 1


def test_gene_values_wrap_modulo_wordlist_length(worked_example):
    index, wl = worked_example
    config = DecodeConfig(k_mode="fixed", fixed_k=2)
    chrom = Chromosome(word_genes=(8, 9, 8, 9, 8, 9, 8, 9))  # 8 -> space, 9 -> nasa
    qs = decode(chrom, wl, index, config)
    assert str(qs.queries[0]) == "space"
    assert str(qs.queries[1]) == "nasa"  # later repeats of both are skipped


def test_kgene_mode_mismatch_raises(worked_example):
    index, wl = worked_example
    with pytest.raises(ValueError):
        decode(Chromosome(word_genes=(0, 1)), wl, index, DecodeConfig(k_mode="discovered"))
    with pytest.raises(ValueError):
        decode(
            Chromosome(word_genes=(0, 1), k_gene=2),
            wl,
            index,
            DecodeConfig(k_mode="fixed", fixed_k=2),
        )


def test_query_text_format(worked_example):
    index, wl = worked_example
    config = DecodeConfig(k_mode="discovered")
    chrom = Chromosome(k_gene=3, word_genes=(0, 7, 2, 3, 3, 5, 1, 4, 2))
    text = decode(chrom, wl, index, config).to_text()
    assert text.splitlines() == [
        "cluster 0: space OR orbit OR nasa",
        "cluster 1: game OR hockey",
        "cluster 2: god",
    ]


def test_decode_config_validation():
    with pytest.raises(ValueError):
        DecodeConfig(intersect_threshold=1.5)
    with pytest.raises(ValueError):
        DecodeConfig(k_mode="fixed")
    with pytest.raises(ValueError):
        DecodeConfig(k_mode="nope")


_genomes = st.lists(st.integers(min_value=0, max_value=30), min_size=9, max_size=9)


@settings(max_examples=80, derandomize=True)
@given(_genomes, st.integers(min_value=2, max_value=4), st.floats(min_value=0.0, max_value=1.0))
def test_decode_properties(genome, k, threshold):
    corpus = corpus_from_term_lists(
        {
            "d0": ["space", "orbit", "nasa"],
            "d1": ["space", "nasa"],
            "d2": ["space", "orbit"],
            "d3": ["god"],
            "d4": ["file", "sale"],
            "d5": ["game", "hockey"],
            "d6": ["game", "hockey"],
            "d7": ["game", "orbit"],
        }
    )
    index = build_index(corpus)
    wl = WordList(
        entries=tuple(
            (t, float(-i)) for i, t in enumerate(
                ["space", "nasa", "god", "orbit", "hockey", "file", "sale", "game"]
            )
        )
    )
    config = DecodeConfig(k_mode="discovered", intersect_threshold=threshold)
    chrom = Chromosome(k_gene=k, word_genes=tuple(genome))

    qs1 = decode(chrom, wl, index, config)
    qs2 = decode(chrom, wl, index, config)
    assert qs1 == qs2  # pure

    words = [w for q in qs1.non_empty() for w in q.words]
    assert len(words) == len(set(words))  # global uniqueness

    for q in qs1.non_empty():  # admitted words satisfy the threshold when re-checked
        for w in q.extra_words:
            assert intersect_ratio(index, q.root_word, w) >= threshold

    # raising the threshold never lengthens any query
    higher = DecodeConfig(k_mode="discovered", intersect_threshold=min(1.0, threshold + 0.25))
    qs_hi = decode(chrom, wl, index, higher)
    for q_lo, q_hi in zip(qs1.queries, qs_hi.queries):
        lo_len = 0 if q_lo is None else len(q_lo.words)
        hi_len = 0 if q_hi is None else len(q_hi.words)
        assert hi_len <= lo_len
