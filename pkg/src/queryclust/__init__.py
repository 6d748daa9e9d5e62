"""Document clustering from evolved disjunctive search queries."""

from .baseline import FeatureMatrix, kmeans_pp, tfidf_matrix
from .clusters import ClusterAssignment
from .corpus import (
    DEFAULT_STOP_WORDS,
    Corpus,
    RawDocument,
    TokenizedDocument,
    build_corpus,
    load_corpus,
    sample_per_category,
    tokenize,
)
from .evolve import EvolutionResult, GAConfig, evolve_run, fitness, seed_clusters, unique_hits
from .expand import knn_expand, vectorize
from .index import InvertedIndex, build_index
from .metrics import (
    ContingencyTable,
    ValidationScores,
    adjusted_rand_index,
    cluster_count_error,
    contingency,
    score_assignment,
    v_measure,
)
from .querygen import Chromosome, DecodeConfig, Query, QuerySet, decode, intersect_ratio
from .wordlist import WordList, build_wordlist, term_score

__version__ = "0.1.0"

__all__ = [
    "ClusterAssignment",
    "Chromosome",
    "ContingencyTable",
    "Corpus",
    "DEFAULT_STOP_WORDS",
    "DecodeConfig",
    "EvolutionResult",
    "FeatureMatrix",
    "GAConfig",
    "InvertedIndex",
    "Query",
    "QuerySet",
    "RawDocument",
    "TokenizedDocument",
    "ValidationScores",
    "adjusted_rand_index",
    "build_corpus",
    "build_index",
    "build_wordlist",
    "cluster_count_error",
    "contingency",
    "decode",
    "evolve_run",
    "fitness",
    "intersect_ratio",
    "kmeans_pp",
    "knn_expand",
    "load_corpus",
    "sample_per_category",
    "score_assignment",
    "seed_clusters",
    "tfidf_matrix",
    "tokenize",
    "unique_hits",
    "v_measure",
    "vectorize",
    "__version__",
]
