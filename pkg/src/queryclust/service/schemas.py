"""Pydantic request/response models for the clustering service."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from ..harness import MODES
from ..synth import PRESETS


class DatasetSpec(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    kind: str = "synthetic"  # jsonl | csv | category-dirs | synthetic
    path: str | None = None
    preset: str = Field(default="blocks3", description=f"one of {PRESETS}")
    corpus_seed: int = Field(default=0, alias="corpusSeed")
    docs_per_class: int | None = Field(default=None, alias="docsPerClass")
    text_field: str = Field(default="text", alias="textField")
    label_field: str = Field(default="label", alias="labelField")
    id_field: str = Field(default="id", alias="idField")
    n_per_category: int | None = Field(default=None, alias="nPerCategory")
    sample_seed: int = Field(default=0, alias="sampleSeed")


class GAParamsSpec(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    subpopulations: int = 4
    population_total: int = Field(default=512, alias="populationTotal")
    generations: int = 100
    crossover_prob: float = Field(default=0.8, alias="crossoverProb")
    mutation_prob: float = Field(default=0.1, alias="mutationProb")
    elitism: int = 2
    tournament_size: int = Field(default=2, alias="tournamentSize")
    migration_interval: int = Field(default=30, alias="migrationInterval")
    migrants_per_exchange: int = Field(default=3, alias="migrantsPerExchange")
    k_penalty: float = Field(default=0.02, alias="kPenalty")
    intersect_threshold: float = Field(default=0.5, alias="intersectThreshold")
    max_words_per_query: int = Field(default=4, alias="maxWordsPerQuery")
    k_min: int = Field(default=2, alias="kMin")
    k_max: int = Field(default=9, alias="kMax")


class ExperimentRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    dataset: DatasetSpec = DatasetSpec()
    mode: str = Field(default="esq-discovered", description=f"one of {MODES}")
    k: int | None = None
    runs: int = 11
    base_run_seed: int = Field(default=0, alias="baseRunSeed")
    wordlist_size: int = Field(default=100, alias="wordlistSize")
    knn_k: int = Field(default=10, alias="knnK")
    max_features: int = Field(default=1000, alias="maxFeatures")
    beta: float = 1.0
    ga: GAParamsSpec = GAParamsSpec()


class SweepRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    experiment: ExperimentRequest = ExperimentRequest()
    param: str = "intersect_threshold"
    values: list[float] = [0.0, 0.25, 0.5, 0.75, 1.0]


class ScoreBlock(BaseModel):
    h: float
    c: float
    v: float
    ari: float
    count_error: int
    beta: float = 1.0


class RunRow(BaseModel):
    run_seed: int
    discovered_k: int
    declared_k: int
    coverage: float
    pre: ScoreBlock | None = None
    post: ScoreBlock
    queries: list[str] = []


class Aggregate(BaseModel):
    mean: float
    std: float


class TimingBlock(BaseModel):
    index_build_ms: float
    runs: list[dict]
    time_ms: Aggregate


class ClusterResponse(BaseModel):
    config: dict
    doc_count: int
    class_count: int
    runs: list[RunRow]
    aggregates: dict[str, Aggregate]
    timing: TimingBlock


class SweepPoint(BaseModel):
    param: str
    value: float
    aggregates: dict[str, Aggregate]


class SweepResponse(BaseModel):
    points: list[SweepPoint]


class CompareRow(BaseModel):
    system: str
    mean_v: float
    std_v: float
    mean_ari: float
    std_ari: float
    mean_count_error: float
    mean_coverage: float


class CompareResponse(BaseModel):
    esq: dict
    kmeans: dict
    table: list[CompareRow]


class EvaluateRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    cluster_indices: list[int] = Field(alias="clusterIndices")
    labels: list[str | None]
    beta: float = 1.0


class EvaluateResponse(BaseModel):
    scores: ScoreBlock
    counted_documents: int


class WordlistRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    dataset: DatasetSpec = DatasetSpec()
    size: int = 100


class WordlistEntry(BaseModel):
    rank: int
    term: str
    score: float


class WordlistResponse(BaseModel):
    doc_count: int
    vocabulary: int
    entries: list[WordlistEntry]


class IndexRequest(BaseModel):
    dataset: DatasetSpec = DatasetSpec()


class IndexResponse(BaseModel):
    doc_count: int
    vocabulary: int
    label_names: list[str]
    dump: dict


class HealthResponse(BaseModel):
    status: str
    version: str
