"""Corpus loading, tokenization and per-category sampling.

Documents arrive as JSONL, CSV or one-file-per-document category
directories, are normalized into term multisets, and can be subsampled to
a fixed number of documents per category with a seeded generator.
"""

from __future__ import annotations

import csv
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

# Pinned stop set (version it, don't grow it silently): ~30 high-frequency
# English function words. Callers may pass their own set instead.
DEFAULT_STOP_WORDS = frozenset(
    {
        "the", "a", "an", "and", "or", "of", "to", "in", "on", "at", "for",
        "is", "are", "was", "were", "be", "been", "it", "its", "this",
        "that", "with", "as", "by", "from", "but", "not", "have", "has",
        "had", "i", "you", "he", "she", "they", "we",
    }
)

_TOKEN_SPLIT = re.compile(r"[^a-z0-9]+")

CORPUS_FORMATS = ("jsonl", "csv", "category-dirs")


class CorpusError(ValueError):
    """Raised for unreadable sources or malformed records."""


@dataclass(frozen=True)
class RawDocument:
    id: str
    text: str
    label: str | None = None


@dataclass(frozen=True)
class TokenizedDocument:
    id: str
    terms: Counter
    label: str | None = None


@dataclass
class Corpus:
    """An ordered collection of tokenized documents with optional labels."""

    documents: list[TokenizedDocument]
    label_names: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.documents)

    @property
    def labels(self) -> list[str | None]:
        return [d.label for d in self.documents]

    def label_counts(self) -> Counter:
        return Counter(d.label for d in self.documents if d.label is not None)


def tokenize(doc: RawDocument, stop_words: frozenset[str] | set[str] = DEFAULT_STOP_WORDS) -> TokenizedDocument:
    """Lowercase, split on non-alphanumerics, drop stop words and tokens
    shorter than two characters, and count the survivors."""
    counts: Counter = Counter()
    for tok in _TOKEN_SPLIT.split(doc.text.lower()):
        if len(tok) < 2 or tok in stop_words:
            continue
        counts[tok] += 1
    return TokenizedDocument(id=doc.id, terms=counts, label=doc.label)


def _label_names_in_order(docs: list[RawDocument] | list[TokenizedDocument]) -> list[str]:
    seen: dict[str, None] = {}
    for d in docs:
        if d.label is not None and d.label not in seen:
            seen[d.label] = None
    return list(seen)


def build_corpus(
    raw_docs: list[RawDocument],
    stop_words: frozenset[str] | set[str] = DEFAULT_STOP_WORDS,
) -> Corpus:
    """Tokenize raw documents into a Corpus, preserving order."""
    ids = set()
    for d in raw_docs:
        if not d.id:
            raise CorpusError("document with empty id")
        if d.id in ids:
            raise CorpusError(f"duplicate document id {d.id!r}")
        ids.add(d.id)
    docs = [tokenize(d, stop_words) for d in raw_docs]
    return Corpus(documents=docs, label_names=_label_names_in_order(docs))


def load_raw_documents(
    path: str | Path,
    format: str,
    *,
    text_field: str = "text",
    label_field: str = "label",
    id_field: str = "id",
) -> list[RawDocument]:
    """Read raw documents from ``path`` in one of CORPUS_FORMATS.

    Missing ids are synthesized from the source ordinal. Malformed records
    abort the load with a locator rather than being skipped, since silent
    skips would corrupt per-category counts.
    """
    p = Path(path)
    if format not in CORPUS_FORMATS:
        raise CorpusError(f"unknown corpus format {format!r} (expected one of {CORPUS_FORMATS})")
    if not p.exists():
        raise CorpusError(f"corpus path does not exist: {p}")

    if format == "jsonl":
        return _load_jsonl(p, text_field, label_field, id_field)
    if format == "csv":
        return _load_csv(p, text_field, label_field, id_field)
    return _load_category_dirs(p)


def _load_jsonl(p: Path, text_field: str, label_field: str, id_field: str) -> list[RawDocument]:
    docs: list[RawDocument] = []
    with p.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{p}:{lineno}: invalid JSON ({exc})") from exc
            if not isinstance(obj, dict) or text_field not in obj:
                raise CorpusError(f"{p}:{lineno}: record missing {text_field!r} field")
            doc_id = str(obj.get(id_field) or len(docs))
            label = obj.get(label_field)
            docs.append(
                RawDocument(
                    id=doc_id,
                    text=str(obj[text_field]),
                    label=None if label is None else str(label),
                )
            )
    return docs


def _load_csv(p: Path, text_field: str, label_field: str, id_field: str) -> list[RawDocument]:
    docs: list[RawDocument] = []
    with p.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or text_field not in reader.fieldnames:
            raise CorpusError(f"{p}: CSV is missing a {text_field!r} column")
        has_label = label_field in (reader.fieldnames or [])
        has_id = id_field in (reader.fieldnames or [])
        for rowno, row in enumerate(reader, start=2):
            text = row.get(text_field)
            if text is None:
                raise CorpusError(f"{p}:{rowno}: row missing {text_field!r} value")
            doc_id = row[id_field] if has_id and row.get(id_field) else str(len(docs))
            label = row.get(label_field) if has_label else None
            docs.append(RawDocument(id=doc_id, text=text, label=label or None))
    return docs


def _load_category_dirs(root: Path) -> list[RawDocument]:
    if not root.is_dir():
        raise CorpusError(f"category-dirs root is not a directory: {root}")
    docs: list[RawDocument] = []
    for cat_dir in sorted(d for d in root.iterdir() if d.is_dir()):
        for f in sorted(d for d in cat_dir.iterdir() if d.is_file()):
            try:
                text = f.read_text(encoding="utf-8")
            except (OSError, UnicodeDecodeError) as exc:
                raise CorpusError(f"{f}: unreadable document ({exc})") from exc
            docs.append(RawDocument(id=f"{cat_dir.name}/{f.name}", text=text, label=cat_dir.name))
    return docs


def load_corpus(
    path: str | Path,
    format: str,
    *,
    text_field: str = "text",
    label_field: str = "label",
    id_field: str = "id",
    stop_words: frozenset[str] | set[str] = DEFAULT_STOP_WORDS,
) -> Corpus:
    """load_raw_documents followed by tokenization."""
    return build_corpus(
        load_raw_documents(path, format, text_field=text_field, label_field=label_field, id_field=id_field),
        stop_words,
    )


def sample_per_category(corpus: Corpus, n: int, seed: int) -> Corpus:
    """Draw exactly ``n`` documents per category without replacement.

    The draw is seeded and reproducible; selected documents keep their
    original corpus order. Unlabeled documents are never selected.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    by_label: dict[str, list[int]] = {name: [] for name in corpus.label_names}
    for i, doc in enumerate(corpus.documents):
        if doc.label is not None:
            by_label[doc.label].append(i)

    for name in corpus.label_names:
        if len(by_label[name]) < n:
            raise ValueError(
                f"category {name!r} has only {len(by_label[name])} documents, need {n}"
            )

    rng = np.random.default_rng(seed)
    keep: set[int] = set()
    for name in corpus.label_names:
        idx = by_label[name]
        chosen = rng.choice(len(idx), size=n, replace=False)
        keep.update(idx[j] for j in chosen)

    docs = [corpus.documents[i] for i in sorted(keep)]
    return Corpus(documents=docs, label_names=list(corpus.label_names))


def corpus_to_jsonl(corpus_docs: list[RawDocument], path: str | Path) -> None:
    """Write raw documents as the canonical JSONL interchange format."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for d in corpus_docs:
            rec: dict = {"id": d.id, "text": d.text}
            if d.label is not None:
                rec["label"] = d.label
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
