from __future__ import annotations

import pytest

from queryclust.corpus import Corpus, RawDocument, build_corpus


def corpus_from_term_lists(doc_terms: dict[str, list[str]], labels: dict[str, str] | None = None) -> Corpus:
    """Build a corpus from explicit token lists (no stop words applied)."""
    raw = [
        RawDocument(id=doc_id, text=" ".join(terms), label=(labels or {}).get(doc_id))
        for doc_id, terms in doc_terms.items()
    ]
    return build_corpus(raw, stop_words=frozenset())


@pytest.fixture(scope="session")
def toy_corpus() -> Corpus:
    """Six tiny documents over a space/hockey vocabulary, labels X and Y."""
    docs = {
        "d1": ["space", "orbit", "nasa"],
        "d2": ["space", "nasa"],
        "d3": ["orbit", "moon"],
        "d4": ["hockey", "game"],
        "d5": ["game", "team", "hockey"],
        "d6": ["team", "game"],
    }
    labels = {"d1": "X", "d2": "X", "d3": "X", "d4": "Y", "d5": "Y", "d6": "Y"}
    return corpus_from_term_lists(docs, labels)


@pytest.fixture(scope="session")
def toy_index(toy_corpus):
    from queryclust.index import build_index

    return build_index(toy_corpus)
