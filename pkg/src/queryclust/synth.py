"""Seeded synthetic corpora with controllable class structure.

Two generators:

* ``blocks_corpus`` - classes with fully disjoint vocabularies; the
  easiest possible separation, used to sanity-check the whole pipeline.
* ``themes_corpus`` - newsgroup-flavoured classes. Each class has a small
  set of bursty "topic" words (a hub plus satellites that mostly co-occur
  with it, which is what lets the intersect rule assemble multi-word
  queries), a mid-frequency class-specific filler vocabulary that carries
  the nearest-neighbour signal, corpus-wide background words, rare noise,
  and optionally vocabulary shared between neighbouring classes to make
  the problem harder for distance-based methods.

Everything is drawn from a single seeded generator, so a (preset, seed)
pair always produces the same corpus.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Corpus, RawDocument, build_corpus


def _tf(rng: np.random.Generator, p: float = 0.55, cap: int = 4) -> int:
    return int(min(rng.geometric(p), cap))


def _hub_tf(rng: np.random.Generator) -> int:
    # Hubs are bursty head words: high within-doc frequency keeps their
    # rank key positive at a class coverage sparse words cannot reach.
    return int(min(1 + rng.geometric(0.5), 8))


def blocks_corpus(
    classes: int = 3,
    docs_per_class: int = 100,
    words_per_class: int = 20,
    doc_len: tuple[int, int] = (30, 60),
    seed: int = 0,
) -> Corpus:
    """Classes with disjoint vocabularies and Zipf-weighted word draws."""
    rng = np.random.default_rng([seed, 0xB10C])
    raw: list[RawDocument] = []
    for c in range(classes):
        vocab = [f"c{c}w{j:02d}" for j in range(words_per_class)]
        weights = 1.0 / (np.arange(words_per_class) + 1.0)
        weights /= weights.sum()
        for i in range(docs_per_class):
            n = int(rng.integers(doc_len[0], doc_len[1] + 1))
            tokens = rng.choice(words_per_class, size=n, p=weights)
            text = " ".join(vocab[t] for t in tokens)
            raw.append(RawDocument(id=f"class{c}-{i:04d}", text=text, label=f"class{c}"))
    return build_corpus(raw)


@dataclass(frozen=True)
class ThemeParams:
    """Knobs for themes_corpus; defaults are the calibrated preset values."""

    satellites_per_class: int = 14
    hub_doc_prob: float = 0.24  # fraction of class docs carrying the hub
    quiet_doc_prob: float = 0.12  # docs with no main-topic words at all
    sat_prob_in_hub_doc: float = 0.40
    sat_prob_in_regular_doc: float = 0.09
    minor_groups_per_class: int = 2
    minor_sats_per_group: int = 2
    minor_fire_prob: float = 0.10  # within quiet docs
    minor_sat_prob: float = 0.65
    background_words: int = 25
    background_doc_prob: float = 0.35
    filler_words_per_class: int = 30
    filler_doc_prob_range: tuple[float, float] = (0.45, 0.70)
    cross_doc_prob: float = 0.0  # cross-posted docs borrowing neighbour vocab
    cross_filler_scale: float = 0.5
    shared_filler_words: int = 0  # per adjacent class pair
    shared_filler_doc_prob: float = 0.35
    pair_shared_words: int = 0  # heavy shared vocabulary between classes 0 and 1
    pair_shared_doc_prob: float = 0.5
    pair_filler_scale: float = 1.0  # damping of the pair classes' own fillers
    noise_pool: int = 3000
    noise_per_doc: tuple[int, int] = (1, 3)


def themes_corpus(
    classes: int = 3,
    docs_per_class: int = 400,
    seed: int = 0,
    params: ThemeParams = ThemeParams(),
) -> Corpus:
    """Newsgroup-flavoured labelled corpus (see module docstring)."""
    rng = np.random.default_rng([seed, 0x7E3A])
    p = params

    background = [f"bg{j:02d}" for j in range(p.background_words)]
    fillers = [[f"c{c}f{j:02d}" for j in range(p.filler_words_per_class)] for c in range(classes)]
    filler_probs = [
        rng.uniform(p.filler_doc_prob_range[0], p.filler_doc_prob_range[1], size=p.filler_words_per_class)
        for _ in range(classes)
    ]
    hubs = [f"c{c}hub" for c in range(classes)]
    sats = [[f"c{c}s{j:02d}" for j in range(p.satellites_per_class)] for c in range(classes)]
    minors = [
        [
            (f"c{c}m{g}h", [f"c{c}m{g}s{t}" for t in range(p.minor_sats_per_group)])
            for g in range(p.minor_groups_per_class)
        ]
        for c in range(classes)
    ]
    shared = [
        [f"sh{c}{(c + 1) % classes}w{j:02d}" for j in range(p.shared_filler_words)]
        for c in range(classes)
    ]
    pair_shared = [f"pairw{j:02d}" for j in range(p.pair_shared_words)]

    raw: list[RawDocument] = []
    for c in range(classes):
        for i in range(docs_per_class):
            tokens: list[str] = []
            for b in background:
                if rng.random() < p.background_doc_prob:
                    tokens.append(b)
            cross = rng.random() < p.cross_doc_prob
            own_scale = p.cross_filler_scale if cross else 1.0
            if pair_shared and c in (0, 1):
                own_scale *= p.pair_filler_scale
            for w, fp in zip(fillers[c], filler_probs[c]):
                if rng.random() < fp * own_scale:
                    tokens.extend([w] * _tf(rng))
            if cross:
                other = (c + 1) % classes if rng.random() < 0.5 else (c - 1) % classes
                for w, fp in zip(fillers[other], filler_probs[other]):
                    if rng.random() < fp * p.cross_filler_scale:
                        tokens.extend([w] * _tf(rng))
            if p.shared_filler_words:
                for pool in (shared[c], shared[(c - 1) % classes]):
                    for w in pool:
                        if rng.random() < p.shared_filler_doc_prob:
                            tokens.extend([w] * _tf(rng))
            if pair_shared and c in (0, 1):
                for w in pair_shared:
                    if rng.random() < p.pair_shared_doc_prob:
                        tokens.extend([w] * _tf(rng))

            u = rng.random()
            if u < p.hub_doc_prob:
                tokens.extend([hubs[c]] * _hub_tf(rng))
                for s in sats[c]:
                    if rng.random() < p.sat_prob_in_hub_doc:
                        tokens.extend([s] * _tf(rng))
            elif u < 1.0 - p.quiet_doc_prob:
                for s in sats[c]:
                    if rng.random() < p.sat_prob_in_regular_doc:
                        tokens.extend([s] * _tf(rng))
            else:
                for mh, msats in minors[c]:
                    if rng.random() < p.minor_fire_prob:
                        tokens.extend([mh] * _tf(rng))
                        for ms in msats:
                            if rng.random() < p.minor_sat_prob:
                                tokens.extend([ms] * _tf(rng))

            n_noise = int(rng.integers(p.noise_per_doc[0], p.noise_per_doc[1] + 1))
            for t in rng.integers(0, p.noise_pool, size=n_noise):
                tokens.append(f"nz{int(t):04d}")

            perm = rng.permutation(len(tokens))
            text = " ".join(tokens[j] for j in perm)
            raw.append(RawDocument(id=f"class{c}-{i:04d}", text=text, label=f"class{c}"))
    return build_corpus(raw)


# Named presets used by the CLI/service and the acceptance suite. "ng3"-style
# presets are stand-ins shaped like the public newsgroup/newswire datasets
# (3/5 topical classes, 4 overlapping classes), not the real corpora.
PRESETS = ("blocks3", "ng3-like", "ng5-like", "r4-like")


def preset_corpus(name: str, seed: int = 0, docs_per_class: int | None = None) -> Corpus:
    if name == "blocks3":
        return blocks_corpus(classes=3, docs_per_class=docs_per_class or 100, seed=seed)
    if name == "ng3-like":
        return themes_corpus(
            classes=3,
            docs_per_class=docs_per_class or 400,
            seed=seed,
            params=ThemeParams(
                shared_filler_words=10,
                shared_filler_doc_prob=0.30,
                cross_doc_prob=0.10,
            ),
        )
    if name == "ng5-like":
        return themes_corpus(
            classes=5,
            docs_per_class=docs_per_class or 400,
            seed=seed,
            params=ThemeParams(
                hub_doc_prob=0.42,
                satellites_per_class=6,
                sat_prob_in_hub_doc=0.25,
                sat_prob_in_regular_doc=0.09,
                shared_filler_words=10,
                shared_filler_doc_prob=0.30,
                cross_doc_prob=0.10,
            ),
        )
    if name == "r4-like":
        return themes_corpus(
            classes=4,
            docs_per_class=docs_per_class or 400,
            seed=seed,
            params=ThemeParams(
                shared_filler_words=10,
                shared_filler_doc_prob=0.30,
                cross_doc_prob=0.12,
                pair_shared_words=60,
                pair_shared_doc_prob=0.60,
            ),
        )
    raise ValueError(f"unknown preset {name!r} (expected one of {PRESETS})")
