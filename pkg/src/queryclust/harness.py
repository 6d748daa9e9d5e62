"""Experiment orchestration: seeded multi-run execution and reporting.

An experiment fixes a dataset and a clustering mode, then executes ``runs``
independent runs with seeds base_run_seed + i. Corpus loading, sampling,
indexing and the word list are identical across runs (the sample seed is
part of the dataset config), so they are built once; per-run wall time
covers the clustering phase, and the shared index-build time is reported
separately (with_index = build + clustering).

The canonical JSON report contains only deterministic fields - two runs of
the same config produce byte-identical files. Wall-clock timings go to a
``*.timing.json`` sidecar and into the CSV.
"""

from __future__ import annotations

import csv
import json
import statistics
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from scipy import sparse

from .baseline import kmeans_pp, tfidf_matrix
from .clusters import assignment_csv_rows
from .corpus import CORPUS_FORMATS, Corpus, load_corpus, sample_per_category
from .evolve import GAConfig, evolve_run, seed_clusters
from .expand import doc_matrix, knn_expand
from .index import InvertedIndex, build_index
from .metrics import ValidationScores, score_assignment
from .querygen import DecodeConfig
from .synth import PRESETS, preset_corpus
from .wordlist import WordList, build_wordlist

MODES = ("esq-fixed", "esq-discovered", "kmeans")


@dataclass(frozen=True)
class DatasetConfig:
    """Where documents come from: a file in a supported format, or a
    named synthetic preset."""

    kind: str = "synthetic"  # one of CORPUS_FORMATS or "synthetic"
    path: str | None = None
    preset: str = "blocks3"
    corpus_seed: int = 0
    docs_per_class: int | None = None
    text_field: str = "text"
    label_field: str = "label"
    id_field: str = "id"
    n_per_category: int | None = None
    sample_seed: int = 0

    def __post_init__(self):
        if self.kind == "synthetic":
            if self.preset not in PRESETS:
                raise ValueError(f"unknown preset {self.preset!r} (expected one of {PRESETS})")
        elif self.kind in CORPUS_FORMATS:
            if not self.path:
                raise ValueError(f"dataset kind {self.kind!r} requires a path")
        else:
            raise ValueError(f"unknown dataset kind {self.kind!r}")


@dataclass(frozen=True)
class GAParams:
    """Evolution and decode parameters; seed is supplied per run."""

    subpopulations: int = 4
    population_total: int = 512
    generations: int = 100
    crossover_prob: float = 0.8
    mutation_prob: float = 0.1
    elitism: int = 2
    tournament_size: int = 2
    migration_interval: int = 30
    migrants_per_exchange: int = 3
    k_penalty: float = 0.02
    intersect_threshold: float = 0.5
    max_words_per_query: int = 4
    k_min: int = 2
    k_max: int = 9

    def to_ga_config(self, mode: str, k: int | None, seed: int) -> GAConfig:
        if mode == "esq-fixed":
            decode = DecodeConfig(
                intersect_threshold=self.intersect_threshold,
                k_mode="fixed",
                fixed_k=k,
                k_min=self.k_min,
                k_max=self.k_max,
                max_words_per_query=self.max_words_per_query,
            )
        else:
            decode = DecodeConfig(
                intersect_threshold=self.intersect_threshold,
                k_mode="discovered",
                k_min=self.k_min,
                k_max=self.k_max,
                max_words_per_query=self.max_words_per_query,
            )
        return GAConfig(
            subpopulations=self.subpopulations,
            population_total=self.population_total,
            generations=self.generations,
            crossover_prob=self.crossover_prob,
            mutation_prob=self.mutation_prob,
            elitism=self.elitism,
            tournament_size=self.tournament_size,
            migration_interval=self.migration_interval,
            migrants_per_exchange=self.migrants_per_exchange,
            k_penalty=self.k_penalty,
            seed=seed,
            decode=decode,
        )


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    mode: str = "esq-discovered"
    k: int | None = None  # required for esq-fixed and kmeans
    runs: int = 11
    base_run_seed: int = 0
    wordlist_size: int = 100
    knn_k: int = 10
    max_features: int = 1000
    beta: float = 1.0
    include_assignments: bool = False  # per-run docId,label,clusterIndex,assignedBy rows
    include_trace: bool = False  # per-run (generation, island, best fitness) rows
    ga: GAParams = field(default_factory=GAParams)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r} (expected one of {MODES})")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.mode in ("esq-fixed", "kmeans") and not self.k:
            raise ValueError(f"mode {self.mode!r} requires k")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, obj: dict) -> "ExperimentConfig":
        obj = _snake_keys(obj)
        dataset = DatasetConfig(**_snake_keys(obj.pop("dataset", {}))) if "dataset" in obj else DatasetConfig()
        ga = GAParams(**_snake_keys(obj.pop("ga", {}))) if "ga" in obj else GAParams()
        return cls(dataset=dataset, ga=ga, **obj)


_CAMEL_ALIASES = {
    "intersectthreshold": "intersect_threshold",
    "kpenalty": "k_penalty",
    "populationtotal": "population_total",
    "crossoverprob": "crossover_prob",
    "mutationprob": "mutation_prob",
    "tournamentsize": "tournament_size",
    "migrationinterval": "migration_interval",
    "migrantsperexchange": "migrants_per_exchange",
    "maxwordsperquery": "max_words_per_query",
    "kmin": "k_min",
    "kmax": "k_max",
    "baserunseed": "base_run_seed",
    "wordlistsize": "wordlist_size",
    "knnk": "knn_k",
    "maxfeatures": "max_features",
    "npercategory": "n_per_category",
    "sampleseed": "sample_seed",
    "corpusseed": "corpus_seed",
    "docsperclass": "docs_per_class",
    "textfield": "text_field",
    "labelfield": "label_field",
    "idfield": "id_field",
    "subpopulations": "subpopulations",
    "generations": "generations",
    "elitism": "elitism",
}


def normalize_param_name(name: str) -> str:
    """Accept both camelCase (as printed in docs) and snake_case keys."""
    if "_" in name:
        return name
    return _CAMEL_ALIASES.get(name.lower(), name)


def _snake_keys(obj: dict) -> dict:
    return {normalize_param_name(k): v for k, v in obj.items()}


# -- report structures -------------------------------------------------------


@dataclass
class RunRecord:
    run_seed: int
    discovered_k: int
    declared_k: int
    coverage: float
    post: ValidationScores
    pre: ValidationScores | None = None
    query_lines: list[str] = field(default_factory=list)
    wall_time_ms: float = 0.0
    wall_time_with_index_ms: float = 0.0
    assignment_rows: list[tuple[str, str, int, str]] | None = None
    fitness_history: list[list[float]] | None = None


@dataclass
class Report:
    config: dict
    doc_count: int
    class_count: int
    index_build_ms: float
    runs: list[RunRecord]

    def aggregates(self) -> dict:
        def agg(values):
            vals = [float(v) for v in values]
            return {
                "mean": statistics.fmean(vals),
                "std": statistics.pstdev(vals),
            }

        out = {
            "v": agg(r.post.v for r in self.runs),
            "ari": agg(r.post.ari for r in self.runs),
            "count_error": agg(r.post.count_error for r in self.runs),
            "coverage": agg(r.coverage for r in self.runs),
            "discovered_k": agg(r.discovered_k for r in self.runs),
        }
        if any(r.pre is not None for r in self.runs):
            out["pre_v"] = agg(r.pre.v for r in self.runs if r.pre is not None)
        return out

    def timing(self) -> dict:
        times = [r.wall_time_ms for r in self.runs]
        return {
            "index_build_ms": self.index_build_ms,
            "runs": [
                {
                    "run_seed": r.run_seed,
                    "wall_time_ms": r.wall_time_ms,
                    "wall_time_with_index_ms": r.wall_time_with_index_ms,
                }
                for r in self.runs
            ],
            "time_ms": {"mean": statistics.fmean(times), "std": statistics.pstdev(times)},
        }


# -- dataset / pipeline ------------------------------------------------------


def load_dataset(cfg: DatasetConfig) -> Corpus:
    if cfg.kind == "synthetic":
        corpus = preset_corpus(cfg.preset, seed=cfg.corpus_seed, docs_per_class=cfg.docs_per_class)
    else:
        corpus = load_corpus(
            cfg.path,
            cfg.kind,
            text_field=cfg.text_field,
            label_field=cfg.label_field,
            id_field=cfg.id_field,
        )
    if cfg.n_per_category is not None:
        corpus = sample_per_category(corpus, cfg.n_per_category, cfg.sample_seed)
    return corpus


@dataclass
class _Prepared:
    corpus: Corpus
    index: InvertedIndex
    wordlist: WordList | None
    knn_matrix: sparse.csr_matrix | None
    feature_matrix: sparse.csr_matrix | None
    build_ms: float


def _prepare(config: ExperimentConfig) -> _Prepared:
    corpus = load_dataset(config.dataset)
    t0 = time.perf_counter()
    index = build_index(corpus)
    if config.mode == "kmeans":
        wordlist = None
        knn_matrix = None
        feature_matrix = tfidf_matrix(index, config.max_features).matrix
    else:
        wordlist = build_wordlist(index, config.wordlist_size)
        knn_matrix = doc_matrix(index)[0]
        feature_matrix = None
    build_ms = (time.perf_counter() - t0) * 1000.0
    return _Prepared(corpus, index, wordlist, knn_matrix, feature_matrix, build_ms)


def _run_once(config: ExperimentConfig, prep: _Prepared, run_seed: int) -> RunRecord:
    corpus, index = prep.corpus, prep.index
    t0 = time.perf_counter()
    if config.mode == "kmeans":
        assignment = kmeans_pp(prep.feature_matrix, int(config.k), seed=run_seed)
        wall_ms = (time.perf_counter() - t0) * 1000.0
        post = score_assignment(assignment, corpus.labels, corpus.label_names, config.beta)
        return RunRecord(
            run_seed=run_seed,
            discovered_k=assignment.non_empty_cluster_count(),
            declared_k=int(config.k),
            coverage=1.0,
            post=post,
            wall_time_ms=wall_ms,
            wall_time_with_index_ms=wall_ms + prep.build_ms,
            assignment_rows=(
                assignment_csv_rows(assignment, index.doc_ids, index.labels)
                if config.include_assignments
                else None
            ),
        )

    ga_config = config.ga.to_ga_config(config.mode, config.k, run_seed)
    result = evolve_run(index, prep.wordlist, ga_config)
    seeds = seed_clusters(index, result.best_query_set)
    total = knn_expand(index, seeds, k=config.knn_k, matrix=prep.knn_matrix)
    wall_ms = (time.perf_counter() - t0) * 1000.0

    pre = score_assignment(seeds, corpus.labels, corpus.label_names, config.beta)
    post = score_assignment(total, corpus.labels, corpus.label_names, config.beta)
    return RunRecord(
        run_seed=run_seed,
        discovered_k=total.non_empty_cluster_count(),
        declared_k=result.best_query_set.declared_k,
        coverage=seeds.coverage(),
        post=post,
        pre=pre,
        query_lines=result.best_query_set.to_text().splitlines(),
        wall_time_ms=wall_ms,
        wall_time_with_index_ms=wall_ms + prep.build_ms,
        assignment_rows=(
            assignment_csv_rows(total, index.doc_ids, index.labels)
            if config.include_assignments
            else None
        ),
        fitness_history=result.fitness_history if config.include_trace else None,
    )


def run_experiment(config: ExperimentConfig) -> Report:
    """Execute all runs; any run failure aborts the experiment."""
    prep = _prepare(config)
    records = []
    for i in range(config.runs):
        seed = config.base_run_seed + i
        try:
            records.append(_run_once(config, prep, seed))
        except Exception as exc:
            raise RuntimeError(f"run {i} (seed {seed}) failed: {exc}") from exc
    return Report(
        config=config.to_dict(),
        doc_count=len(prep.corpus),
        class_count=len(prep.corpus.label_names),
        index_build_ms=prep.build_ms,
        runs=records,
    )


# -- serialization -----------------------------------------------------------


def _scores_dict(s: ValidationScores | None) -> dict | None:
    if s is None:
        return None
    return {"h": s.h, "c": s.c, "v": s.v, "ari": s.ari, "count_error": s.count_error, "beta": s.beta}


def report_to_dict(report: Report, include_timing: bool = False) -> dict:
    out = {
        "config": report.config,
        "doc_count": report.doc_count,
        "class_count": report.class_count,
        "runs": [
            {
                "run_seed": r.run_seed,
                "discovered_k": r.discovered_k,
                "declared_k": r.declared_k,
                "coverage": r.coverage,
                "pre": _scores_dict(r.pre),
                "post": _scores_dict(r.post),
                "queries": r.query_lines,
            }
            for r in report.runs
        ],
        "aggregates": report.aggregates(),
    }
    if include_timing:
        out["timing"] = report.timing()
    return out


def report_json(report: Report, include_timing: bool = False) -> str:
    return json.dumps(report_to_dict(report, include_timing), indent=2, sort_keys=True) + "\n"


def emit_report(report: Report, format: str, path: str | Path) -> None:
    """Write the report; JSON is canonical/deterministic with a timing
    sidecar, CSV is one row per run plus an aggregate row. Query sets are
    additionally written next to the report as readable text."""
    path = Path(path)
    if format == "json":
        path.write_text(report_json(report), encoding="utf-8")
        sidecar = path.with_suffix(".timing.json")
        sidecar.write_text(json.dumps(report.timing(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    elif format == "csv":
        with path.open("w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(
                ["row", "run_seed", "discovered_k", "coverage", "pre_v", "v", "h", "c", "ari",
                 "count_error", "wall_time_ms"]
            )
            for r in report.runs:
                w.writerow(
                    ["run", r.run_seed, r.discovered_k, f"{r.coverage:.6f}",
                     "" if r.pre is None else f"{r.pre.v:.6f}",
                     f"{r.post.v:.6f}", f"{r.post.h:.6f}", f"{r.post.c:.6f}",
                     f"{r.post.ari:.6f}", r.post.count_error, f"{r.wall_time_ms:.3f}"]
                )
            agg = report.aggregates()
            times = report.timing()
            w.writerow(
                ["aggregate", "", f"{agg['discovered_k']['mean']:.3f}",
                 f"{agg['coverage']['mean']:.6f}",
                 f"{agg['pre_v']['mean']:.6f}" if "pre_v" in agg else "",
                 f"{agg['v']['mean']:.6f}", "", "", f"{agg['ari']['mean']:.6f}",
                 f"{agg['count_error']['mean']:.3f}", f"{times['time_ms']['mean']:.3f}"]
            )
    else:
        raise ValueError(f"unknown report format {format!r}")

    if any(r.query_lines for r in report.runs):
        qpath = path.with_suffix(".queries.txt")
        blocks = []
        for r in report.runs:
            blocks.append(f"# run seed {r.run_seed}")
            blocks.extend(r.query_lines)
            blocks.append("")
        qpath.write_text("\n".join(blocks), encoding="utf-8")


def parse_report_json(text: str) -> dict:
    return json.loads(text)


# -- sweep & compare ---------------------------------------------------------

SWEEPABLE = (
    "intersect_threshold",
    "k_penalty",
    "population_total",
    "generations",
    "mutation_prob",
    "crossover_prob",
    "tournament_size",
    "elitism",
    "migration_interval",
    "migrants_per_exchange",
    "subpopulations",
)


def with_param(config: ExperimentConfig, name: str, value) -> ExperimentConfig:
    """New config with one GA/decode key replaced (used by sweeps)."""
    name = normalize_param_name(name)
    if name not in SWEEPABLE:
        raise ValueError(f"cannot sweep {name!r} (one of {SWEEPABLE})")
    ga_fields = asdict(config.ga)
    if isinstance(ga_fields[name], int):
        ga_fields[name] = int(value)
    else:
        ga_fields[name] = float(value)
    return ExperimentConfig(
        dataset=config.dataset,
        mode=config.mode,
        k=config.k,
        runs=config.runs,
        base_run_seed=config.base_run_seed,
        wordlist_size=config.wordlist_size,
        knn_k=config.knn_k,
        max_features=config.max_features,
        beta=config.beta,
        ga=GAParams(**ga_fields),
    )


def run_sweep(config: ExperimentConfig, param: str, values: list[float]) -> list[dict]:
    """One experiment per value; returns per-value aggregate summaries."""
    points = []
    for value in values:
        report = run_experiment(with_param(config, param, value))
        points.append(
            {
                "param": normalize_param_name(param),
                "value": value,
                "aggregates": report.aggregates(),
            }
        )
    return points


def run_compare(config: ExperimentConfig) -> dict:
    """The configured esq mode versus the k-means baseline on one dataset."""
    if config.mode == "kmeans":
        raise ValueError("compare expects an esq mode config; the baseline is added automatically")
    esq_report = run_experiment(config)
    k = config.k
    if k is None:
        k = len(load_dataset(config.dataset).label_names)  # k given in advance for the baseline
    kmeans_config = ExperimentConfig(
        dataset=config.dataset,
        mode="kmeans",
        k=k,
        runs=config.runs,
        base_run_seed=config.base_run_seed,
        max_features=config.max_features,
        beta=config.beta,
        ga=config.ga,
    )
    kmeans_report = run_experiment(kmeans_config)
    return {
        "esq": report_to_dict(esq_report),
        "kmeans": report_to_dict(kmeans_report),
        "table": [
            {"system": config.mode, **_flat_agg(esq_report)},
            {"system": "kmeans", **_flat_agg(kmeans_report)},
        ],
    }


def _flat_agg(report: Report) -> dict:
    agg = report.aggregates()
    return {
        "mean_v": agg["v"]["mean"],
        "std_v": agg["v"]["std"],
        "mean_ari": agg["ari"]["mean"],
        "std_ari": agg["ari"]["std"],
        "mean_count_error": agg["count_error"]["mean"],
        "mean_coverage": agg["coverage"]["mean"],
    }
