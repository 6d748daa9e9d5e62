"""FastAPI service exposing the clustering harness.

The CLI is a thin client of these endpoints; they can also be served
standalone with uvicorn for multi-client use (the index and corpus are
rebuilt per request - requests are self-contained and deterministic).
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__
from ..clusters import ClusterAssignment
from ..harness import (
    DatasetConfig,
    ExperimentConfig,
    GAParams,
    load_dataset,
    report_to_dict,
    run_compare,
    run_experiment,
    run_sweep,
)
from ..index import build_index
from ..metrics import score_assignment
from ..wordlist import build_wordlist, wordlist_csv_rows
from . import schemas


def _dataset_config(spec: schemas.DatasetSpec) -> DatasetConfig:
    return DatasetConfig(**spec.model_dump())


def _experiment_config(req: schemas.ExperimentRequest) -> ExperimentConfig:
    return ExperimentConfig(
        dataset=_dataset_config(req.dataset),
        mode=req.mode,
        k=req.k,
        runs=req.runs,
        base_run_seed=req.base_run_seed,
        wordlist_size=req.wordlist_size,
        knn_k=req.knn_k,
        max_features=req.max_features,
        beta=req.beta,
        ga=GAParams(**req.ga.model_dump()),
    )


def create_app() -> FastAPI:
    app = FastAPI(title="queryclust", version=__version__)

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/cluster")
    def cluster(req: schemas.ExperimentRequest):
        try:
            report = run_experiment(_experiment_config(req))
        except (ValueError, RuntimeError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return report_to_dict(report, include_timing=True)

    @app.post("/compare")
    def compare(req: schemas.ExperimentRequest):
        try:
            return run_compare(_experiment_config(req))
        except (ValueError, RuntimeError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.post("/sweep", response_model=schemas.SweepResponse)
    def sweep(req: schemas.SweepRequest):
        try:
            points = run_sweep(_experiment_config(req.experiment), req.param, req.values)
        except (ValueError, RuntimeError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"points": points}

    @app.post("/evaluate", response_model=schemas.EvaluateResponse)
    def evaluate(req: schemas.EvaluateRequest):
        if len(req.cluster_indices) != len(req.labels):
            raise HTTPException(status_code=400, detail="clusterIndices and labels differ in length")
        clusters = np.asarray(req.cluster_indices, dtype=np.int32)
        count = int(clusters.max()) + 1 if (clusters >= 0).any() else 0
        if count == 0:
            raise HTTPException(status_code=400, detail="no assigned documents to evaluate")
        assignment = ClusterAssignment(assignment=clusters, cluster_count=count)
        try:
            scores = score_assignment(assignment, list(req.labels), beta=req.beta)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {
            "scores": {
                "h": scores.h, "c": scores.c, "v": scores.v,
                "ari": scores.ari, "count_error": scores.count_error, "beta": scores.beta,
            },
            "counted_documents": int((clusters >= 0).sum()),
        }

    @app.post("/wordlist", response_model=schemas.WordlistResponse)
    def wordlist(req: schemas.WordlistRequest):
        try:
            corpus = load_dataset(_dataset_config(req.dataset))
            index = build_index(corpus)
            wl = build_wordlist(index, req.size)
        except (ValueError, OSError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {
            "doc_count": index.doc_count,
            "vocabulary": len(index.postings),
            "entries": [
                {"rank": rank, "term": term, "score": score}
                for term, score, rank in wordlist_csv_rows(wl)
            ],
        }

    @app.post("/index", response_model=schemas.IndexResponse)
    def index_endpoint(req: schemas.IndexRequest):
        try:
            corpus = load_dataset(_dataset_config(req.dataset))
            index = build_index(corpus)
        except (ValueError, OSError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        dump = {
            "doc_count": index.doc_count,
            "doc_ids": index.doc_ids,
            "labels": index.labels,
            "label_names": index.label_names,
            "postings": {t: [[o, c] for o, c in pl] for t, pl in index.postings.items()},
        }
        return {
            "doc_count": index.doc_count,
            "vocabulary": len(index.postings),
            "label_names": index.label_names,
            "dump": dump,
        }

    return app


app = create_app()
