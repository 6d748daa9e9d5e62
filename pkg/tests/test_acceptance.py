"""Acceptance suite: one test per exit criterion, at stated tolerances.

Run with ``pytest -s tests/test_acceptance.py`` to see one PASS/FAIL line
per criterion. The newsgroup/newswire-style corpora are the seeded
synthetic stand-ins from queryclust.synth (the original collections are
not redistributable here); seeds are pinned so every number below is
reproducible.
"""

from __future__ import annotations

import json
import sys
import time

import numpy as np
import pytest

from queryclust.corpus import RawDocument, build_corpus
from queryclust.evolve import seed_clusters, unique_hits
from queryclust.harness import DatasetConfig, ExperimentConfig, GAParams, run_experiment
from queryclust.index import build_index
from queryclust.metrics import ContingencyTable, adjusted_rand_index, v_measure
from queryclust.querygen import Query, QuerySet


def _criterion(n: int, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[criterion {n:2d}] {status}: {detail}", file=sys.stderr)
    assert ok, f"criterion {n} failed: {detail}"


def _dataset(preset: str, seed: int = 1) -> DatasetConfig:
    return DatasetConfig(kind="synthetic", preset=preset, corpus_seed=seed)


def _esq(preset: str, runs: int = 11, **kw) -> ExperimentConfig:
    return ExperimentConfig(
        dataset=_dataset(preset), mode="esq-discovered", runs=runs, base_run_seed=100, **kw
    )


@pytest.fixture(scope="module")
def ng3_esq():
    return run_experiment(_esq("ng3-like"))


@pytest.fixture(scope="module")
def ng3_kmeans():
    return run_experiment(
        ExperimentConfig(dataset=_dataset("ng3-like"), mode="kmeans", k=3, runs=11, base_run_seed=100)
    )


@pytest.fixture(scope="module")
def r4_esq():
    return run_experiment(_esq("r4-like"))


@pytest.fixture(scope="module")
def r4_kmeans():
    return run_experiment(
        ExperimentConfig(dataset=_dataset("r4-like"), mode="kmeans", k=4, runs=11, base_run_seed=100)
    )


@pytest.fixture(scope="module")
def ng5_default():
    return run_experiment(_esq("ng5-like"))


@pytest.fixture(scope="module")
def ng5_threshold_zero():
    return run_experiment(_esq("ng5-like", ga=GAParams(intersect_threshold=0.0)))


@pytest.fixture(scope="module")
def ng5_no_penalty():
    return run_experiment(_esq("ng5-like", ga=GAParams(k_penalty=0.0)))


# -- 1: metric oracle equivalence ---------------------------------------------


def test_criterion_1_metric_oracles():
    from sklearn.metrics import adjusted_rand_score, homogeneity_completeness_v_measure

    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    max_dv = 0.0
    max_da = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 51))
        s = int(rng.integers(1, 7))
        k = int(rng.integers(1, 7))
        classes = rng.integers(0, s, size=n)
        clusters = rng.integers(0, k, size=n)
        counts = np.zeros((s, k), dtype=np.int64)
        for ci, cj in zip(classes, clusters):
            counts[ci, cj] += 1
        table = ContingencyTable(counts=counts, class_names=tuple(map(str, range(s))))

        h, c, v = v_measure(table)
        hs, cs, vs = homogeneity_completeness_v_measure(classes, clusters)
        ari = adjusted_rand_index(table)
        ari_ref = adjusted_rand_score(classes, clusters)
        max_dv = max(max_dv, abs(h - hs), abs(c - cs), abs(v - vs))
        max_da = max(max_da, abs(ari - ari_ref))
    elapsed = time.perf_counter() - t0
    ok = max_dv < 1e-9 and max_da < 1e-9 and elapsed < 10.0
    _criterion(1, ok, f"1000 tables, max |dV|={max_dv:.2e}, max |dARI|={max_da:.2e}, {elapsed:.1f}s")


# -- 2: fitness oracle equivalence --------------------------------------------


def test_criterion_2_unique_hits_oracle():
    rng = np.random.default_rng(515)
    vocab = [f"w{i:02d}" for i in range(14)]
    checked = 0
    t0 = time.perf_counter()
    for _ in range(1000):
        n_docs = int(rng.integers(1, 51))
        doc_terms = [
            list(rng.choice(vocab, size=int(rng.integers(0, 7)))) for _ in range(n_docs)
        ]
        corpus = build_corpus(
            [RawDocument(id=str(i), text=" ".join(t)) for i, t in enumerate(doc_terms)],
            stop_words=frozenset(),
        )
        index = build_index(corpus)
        n_queries = int(rng.integers(1, 6))
        word_lists = [
            list(dict.fromkeys(rng.choice(vocab + ["none"], size=int(rng.integers(0, 4)))))
            for _ in range(n_queries)
        ]
        queries = QuerySet(
            declared_k=n_queries,
            queries=tuple(
                None if not ws else Query(root_word=ws[0], extra_words=tuple(ws[1:]))
                for ws in word_lists
            ),
        )
        expected = 0
        for terms in doc_terms:
            matches = sum(1 for ws in word_lists if ws and set(ws) & set(terms))
            if matches == 1:
                expected += 1
        got = unique_hits(index, queries)
        assert got == expected
        assert seed_clusters(index, queries).assigned_count() == got
        checked += 1
    elapsed = time.perf_counter() - t0
    _criterion(2, checked == 1000, f"{checked} random instances exact, {elapsed:.1f}s")


# -- 3: synthetic separability ------------------------------------------------


def test_criterion_3_synthetic_separability():
    t0 = time.perf_counter()
    report = run_experiment(
        ExperimentConfig(
            dataset=DatasetConfig(kind="synthetic", preset="blocks3", corpus_seed=42),
            mode="esq-discovered",
            runs=11,
            base_run_seed=200,
        )
    )
    elapsed = time.perf_counter() - t0
    perfect = sum(1 for r in report.runs if r.discovered_k == 3 and r.post.v == 1.0)
    ok = perfect >= 10 and elapsed < 60.0
    _criterion(3, ok, f"{perfect}/11 runs with k=3 and post V=1.0, {elapsed:.1f}s")


# -- 4: desk-scale 3-newsgroup-style reproduction ------------------------------


def test_criterion_4_ng3_reproduction(ng3_esq):
    agg = ng3_esq.aggregates()
    mean_v, std_v = agg["v"]["mean"], agg["v"]["std"]
    mean_ari = agg["ari"]["mean"]
    ok = mean_v >= 0.85 and mean_ari >= 0.85 and std_v <= 0.05
    _criterion(4, ok, f"ng3-like: mean V={mean_v:.3f} (>=0.85), mean ARI={mean_ari:.3f} (>=0.85), std V={std_v:.4f} (<=0.05)")


# -- 5: baseline ordering ------------------------------------------------------


def test_criterion_5_beats_kmeans(ng3_esq, ng3_kmeans, r4_esq, r4_kmeans):
    v_ng3 = ng3_esq.aggregates()["v"]["mean"]
    v_ng3_km = ng3_kmeans.aggregates()["v"]["mean"]
    v_r4 = r4_esq.aggregates()["v"]["mean"]
    v_r4_km = r4_kmeans.aggregates()["v"]["mean"]
    ok = v_ng3 > v_ng3_km and v_r4 > v_r4_km
    _criterion(
        5,
        ok,
        f"ng3-like: esq {v_ng3:.3f} > kmeans++ {v_ng3_km:.3f}; r4-like: esq {v_r4:.3f} > kmeans++ {v_r4_km:.3f}",
    )


# -- 6: coverage and pre/post direction ----------------------------------------


def test_criterion_6_coverage_and_direction(ng3_esq):
    agg = ng3_esq.aggregates()
    coverage = agg["coverage"]["mean"]
    pre_v = agg["pre_v"]["mean"]
    post_v = agg["v"]["mean"]
    ok = 0.50 <= coverage <= 0.90 and pre_v >= post_v
    _criterion(
        6,
        ok,
        f"mean coverage={coverage:.3f} in [0.50,0.90]; pre V={pre_v:.3f} >= post V={post_v:.3f}",
    )


# -- 7: intersect-ratio sweep ---------------------------------------------------


def test_criterion_7_threshold_sweep(ng5_default, ng5_threshold_zero, tmp_path):
    v_half = ng5_default.aggregates()["v"]["mean"]
    v_zero = ng5_threshold_zero.aggregates()["v"]["mean"]

    # the sweep must also be runnable as a single CLI command
    from queryclust.cli import main

    out = tmp_path / "sweep.json"
    code = main(
        [
            "sweep", "--preset", "blocks3", "--docs-per-class", "30", "--corpus-seed", "3",
            "--runs", "1", "--seed", "5", "--generations", "12", "--population", "64",
            "--param", "intersectThreshold", "--values", "0,0.25,0.5,0.75,1.0",
            "--out", str(out),
        ]
    )
    sweep_ok = code == 0 and len(json.loads(out.read_text())["points"]) == 5
    ok = v_half > v_zero and sweep_ok
    _criterion(
        7,
        ok,
        f"ng5-like mean V: threshold 0.5 -> {v_half:.3f} > threshold 0.0 -> {v_zero:.3f}; CLI sweep ok={sweep_ok}",
    )


# -- 8: k-penalty sweep ----------------------------------------------------------


def test_criterion_8_penalty_sweep(ng5_default, ng5_no_penalty):
    err_with = ng5_default.aggregates()["count_error"]["mean"]
    err_without = ng5_no_penalty.aggregates()["count_error"]["mean"]
    ok = err_with <= err_without
    _criterion(
        8,
        ok,
        f"ng5-like mean count error: penalty 0.02 -> {err_with:.2f} <= penalty 0 -> {err_without:.2f}",
    )


# -- 9: determinism ---------------------------------------------------------------


def test_criterion_9_cli_determinism(tmp_path):
    from queryclust.cli import main

    args = [
        "cluster", "--preset", "blocks3", "--docs-per-class", "40", "--corpus-seed", "3",
        "--runs", "2", "--seed", "7", "--generations", "25", "--population", "64",
    ]
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    c1 = main(args + ["--out", str(out1)])
    c2 = main(args + ["--out", str(out2)])
    identical = out1.read_bytes() == out2.read_bytes()
    ok = c1 == 0 and c2 == 0 and identical
    _criterion(9, ok, f"two identical cluster invocations byte-identical={identical}")


# -- 10: performance envelope ------------------------------------------------------


def test_criterion_10_performance(ng5_default):
    doc_count = ng5_default.doc_count
    worst_ms = max(r.wall_time_with_index_ms for r in ng5_default.runs)
    ok = doc_count == 2000 and worst_ms < 60_000
    _criterion(
        10,
        ok,
        f"{doc_count} docs, pop 512, 100 generations: slowest run {worst_ms:.0f} ms (< 60000 ms)",
    )
