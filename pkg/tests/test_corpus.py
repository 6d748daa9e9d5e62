from __future__ import annotations

import json
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from queryclust.corpus import (
    DEFAULT_STOP_WORDS,
    CorpusError,
    RawDocument,
    build_corpus,
    corpus_to_jsonl,
    load_corpus,
    load_raw_documents,
    sample_per_category,
    tokenize,
)


def test_tokenize_lowercases_splits_and_drops_stops():
    doc = RawDocument(id="a", text="The Space-Shuttle orbits!")
    out = tokenize(doc, stop_words={"the"})
    assert out.terms == Counter({"space": 1, "shuttle": 1, "orbits": 1})


def test_tokenize_drops_short_tokens():
    out = tokenize(RawDocument(id="a", text="a a a"), stop_words=set())
    assert out.terms == Counter()


def test_tokenize_case_folds_counts():
    out = tokenize(RawDocument(id="a", text="God god GOD"), stop_words=set())
    assert out.terms == Counter({"god": 3})


def test_tokenize_keeps_digit_tokens():
    out = tokenize(RawDocument(id="a", text="route 66 42 x"), stop_words=set())
    assert out.terms == Counter({"route": 1, "66": 1, "42": 1})


def test_load_jsonl(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text('{"id":"a","text":"x","label":"y"}\n', encoding="utf-8")
    docs = load_raw_documents(p, "jsonl")
    assert docs == [RawDocument(id="a", text="x", label="y")]


def test_load_jsonl_synthesizes_ids(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text('{"text":"one"}\n{"text":"two"}\n', encoding="utf-8")
    docs = load_raw_documents(p, "jsonl")
    assert [d.id for d in docs] == ["0", "1"]


def test_load_jsonl_malformed_line_aborts_with_locator(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text('{"text":"ok"}\nnot json\n', encoding="utf-8")
    with pytest.raises(CorpusError, match=":2"):
        load_raw_documents(p, "jsonl")


def test_load_category_dirs(tmp_path):
    (tmp_path / "hockey").mkdir()
    (tmp_path / "space").mkdir()
    (tmp_path / "hockey" / "1.txt").write_text("game on", encoding="utf-8")
    (tmp_path / "hockey" / "2.txt").write_text("skates", encoding="utf-8")
    (tmp_path / "space" / "1.txt").write_text("orbit", encoding="utf-8")
    docs = load_raw_documents(tmp_path, "category-dirs")
    assert [d.label for d in docs] == ["hockey", "hockey", "space"]
    assert len({d.id for d in docs}) == 3


def test_load_csv_per_category_counts(tmp_path):
    p = tmp_path / "tweets.csv"
    lines = ["text,label"]
    for label in ("wildfire", "bombing", "flood"):
        lines += [f"tweet {label} {i},{label}" for i in range(1000)]
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")
    docs = load_raw_documents(p, "csv")
    assert len(docs) == 3000
    counts = Counter(d.label for d in docs)
    assert counts == {"wildfire": 1000, "bombing": 1000, "flood": 1000}


def test_load_csv_missing_text_column(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("body,label\nx,y\n", encoding="utf-8")
    with pytest.raises(CorpusError, match="text"):
        load_raw_documents(p, "csv")


def test_load_missing_path():
    with pytest.raises(CorpusError, match="does not exist"):
        load_raw_documents("/nonexistent/nope.jsonl", "jsonl")


def test_load_unknown_format(tmp_path):
    with pytest.raises(CorpusError, match="format"):
        load_raw_documents(tmp_path, "parquet")


def test_build_corpus_rejects_duplicate_ids():
    docs = [RawDocument(id="a", text="x"), RawDocument(id="a", text="y")]
    with pytest.raises(CorpusError, match="duplicate"):
        build_corpus(docs)


def test_sample_per_category_counts_and_determinism(tmp_path):
    raw = []
    for label in ("a", "b", "c"):
        raw += [RawDocument(id=f"{label}{i}", text=f"word{i % 7} text", label=label) for i in range(1000)]
    corpus = build_corpus(raw)

    s1 = sample_per_category(corpus, 400, seed=7)
    s2 = sample_per_category(corpus, 400, seed=7)
    assert len(s1) == 1200
    assert s1.label_counts() == {"a": 400, "b": 400, "c": 400}
    assert [d.id for d in s1.documents] == [d.id for d in s2.documents]

    s3 = sample_per_category(corpus, 400, seed=8)
    assert [d.id for d in s3.documents] != [d.id for d in s1.documents]


def test_sample_per_category_zero_keeps_label_names():
    corpus = build_corpus([RawDocument(id="a", text="x", label="L")])
    out = sample_per_category(corpus, 0, seed=1)
    assert len(out) == 0
    assert out.label_names == ["L"]


def test_sample_per_category_insufficient_names_category():
    corpus = build_corpus(
        [RawDocument(id="a", text="x", label="small"), RawDocument(id="b", text="x", label="big"),
         RawDocument(id="c", text="x", label="big")]
    )
    with pytest.raises(ValueError, match="small"):
        sample_per_category(corpus, 2, seed=1)


def test_sample_is_submultiset():
    raw = [RawDocument(id=f"d{i}", text=f"t{i}", label="l" + str(i % 2)) for i in range(40)]
    corpus = build_corpus(raw)
    out = sample_per_category(corpus, 5, seed=3)
    original_ids = {d.id for d in corpus.documents}
    assert all(d.id in original_ids for d in out.documents)


def test_jsonl_round_trip(tmp_path):
    raw = [RawDocument(id="a", text="Hello moon base", label="space"),
           RawDocument(id="b", text="slapshot!", label=None)]
    p = tmp_path / "out.jsonl"
    corpus_to_jsonl(raw, p)
    back = load_raw_documents(p, "jsonl")
    assert back == raw
    corpus = load_corpus(p, "jsonl")
    assert corpus.label_names == ["space"]


@settings(max_examples=50, derandomize=True)
@given(st.text(max_size=200))
def test_tokenize_idempotent_and_normalized(text):
    out = tokenize(RawDocument(id="a", text=text))
    flattened = " ".join(t for term, n in out.terms.items() for t in [term] * n)
    again = tokenize(RawDocument(id="a", text=flattened))
    assert again.terms == out.terms
    for term in out.terms:
        assert term == term.lower()
        assert len(term) >= 2
        assert term not in DEFAULT_STOP_WORDS
