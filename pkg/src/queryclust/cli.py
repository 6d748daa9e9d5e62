"""Command-line client for the clustering service.

Every subcommand builds a request and posts it to the FastAPI app - by
default in-process (no server needed), or to a running instance given
``--server http://host:port``. Outputs are written client-side; the JSON
report is canonical (sorted keys, no wall-clock fields) so identical
configurations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import httpx

from .corpus import CORPUS_FORMATS
from .harness import MODES, SWEEPABLE, normalize_param_name
from .synth import PRESETS


class CliError(Exception):
    pass


def _post(server: str | None, path: str, payload: dict) -> dict:
    """POST to a remote service, or to the app in-process when no server is given."""
    if server:
        with httpx.Client(base_url=server, timeout=None) as client:
            resp = client.post(path, json=payload)
            return _check(resp, path)

    import asyncio

    from .service import create_app

    async def call() -> httpx.Response:
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(transport=transport, base_url="http://service", timeout=None) as client:
            return await client.post(path, json=payload)

    return _check(asyncio.run(call()), path)


def _check(resp: httpx.Response, path: str) -> dict:
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except Exception:
            detail = resp.text
        raise CliError(f"{path} failed ({resp.status_code}): {detail}")
    return resp.json()


# -- request assembly --------------------------------------------------------


def _dataset_spec(args) -> dict:
    if getattr(args, "corpus", None):
        fmt = args.format
        if fmt is None:
            raise CliError("--format is required when a corpus path is given")
        spec = {
            "kind": fmt,
            "path": args.corpus,
            "text_field": args.text_field,
            "label_field": args.label_field,
            "id_field": args.id_field,
        }
    else:
        if not getattr(args, "preset", None):
            raise CliError("no dataset given: pass a corpus path with --format, or --preset")
        spec = {"kind": "synthetic", "preset": args.preset, "corpus_seed": args.corpus_seed}
        if getattr(args, "docs_per_class", None):
            spec["docs_per_class"] = args.docs_per_class
    if getattr(args, "n_per_category", None):
        spec["n_per_category"] = args.n_per_category
        spec["sample_seed"] = args.sample_seed
    return spec


def _experiment_request(args) -> dict:
    req: dict = {}
    if getattr(args, "config", None):
        req = json.loads(Path(args.config).read_text(encoding="utf-8"))
    if getattr(args, "corpus", None) or getattr(args, "preset", None):
        req["dataset"] = _dataset_spec(args)
    ga = req.setdefault("ga", {})
    overrides = {
        "mode": getattr(args, "mode", None),
        "k": getattr(args, "k", None),
        "runs": getattr(args, "runs", None),
        "base_run_seed": getattr(args, "seed", None),
        "wordlist_size": getattr(args, "wordlist_size", None),
        "knn_k": getattr(args, "knn_k", None),
        "max_features": getattr(args, "max_features", None),
    }
    for key, value in overrides.items():
        if value is not None:
            req[key] = value
    ga_overrides = {
        "intersect_threshold": getattr(args, "threshold", None),
        "k_penalty": getattr(args, "k_penalty", None),
        "generations": getattr(args, "generations", None),
        "population_total": getattr(args, "population", None),
    }
    for key, value in ga_overrides.items():
        if value is not None:
            ga[key] = value
    if not ga:
        req.pop("ga")
    if "dataset" not in req:
        raise CliError("no dataset given (corpus path, --preset, or --config with a dataset)")
    return req


def _write_report_files(report: dict, out: str | None, csv_out: str | None) -> None:
    timing = report.pop("timing", None)
    canonical = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(canonical, encoding="utf-8")
        if timing is not None:
            Path(out).with_suffix(".timing.json").write_text(
                json.dumps(timing, indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )
        queries = [(r["run_seed"], r.get("queries") or []) for r in report.get("runs", [])]
        if any(q for _, q in queries):
            lines = []
            for seed, qlines in queries:
                lines.append(f"# run seed {seed}")
                lines.extend(qlines)
                lines.append("")
            Path(out).with_suffix(".queries.txt").write_text("\n".join(lines), encoding="utf-8")
    else:
        sys.stdout.write(canonical)
    if csv_out:
        _write_report_csv(report, timing, csv_out)


def _write_report_csv(report: dict, timing: dict | None, path: str) -> None:
    time_by_seed = {}
    if timing:
        time_by_seed = {r["run_seed"]: r["wall_time_ms"] for r in timing.get("runs", [])}
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["row", "run_seed", "discovered_k", "coverage", "pre_v", "v", "h", "c", "ari",
                    "count_error", "wall_time_ms"])
        for r in report["runs"]:
            pre = r.get("pre")
            w.writerow([
                "run", r["run_seed"], r["discovered_k"], f"{r['coverage']:.6f}",
                "" if pre is None else f"{pre['v']:.6f}",
                f"{r['post']['v']:.6f}", f"{r['post']['h']:.6f}", f"{r['post']['c']:.6f}",
                f"{r['post']['ari']:.6f}", r["post"]["count_error"],
                f"{time_by_seed.get(r['run_seed'], 0.0):.3f}",
            ])
        agg = report["aggregates"]
        mean_time = timing["time_ms"]["mean"] if timing else 0.0
        w.writerow([
            "aggregate", "", f"{agg['discovered_k']['mean']:.3f}", f"{agg['coverage']['mean']:.6f}",
            f"{agg['pre_v']['mean']:.6f}" if "pre_v" in agg else "",
            f"{agg['v']['mean']:.6f}", "", "", f"{agg['ari']['mean']:.6f}",
            f"{agg['count_error']['mean']:.3f}", f"{mean_time:.3f}",
        ])


# -- subcommands -------------------------------------------------------------


def _cmd_cluster(args) -> int:
    req = _experiment_request(args)
    report = _post(args.server, "/cluster", req)
    _write_report_files(report, args.out, args.csv)
    agg = report["aggregates"]
    print(
        f"{req.get('mode', 'esq-discovered')}: {len(report['runs'])} runs, "
        f"mean v={agg['v']['mean']:.4f} ari={agg['ari']['mean']:.4f} "
        f"coverage={agg['coverage']['mean']:.3f}",
        file=sys.stderr,
    )
    return 0


def _cmd_compare(args) -> int:
    req = _experiment_request(args)
    result = _post(args.server, "/compare", req)
    text = json.dumps(result["table"], indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(json.dumps(result, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    sys.stdout.write(text)
    return 0


def _cmd_sweep(args) -> int:
    param = normalize_param_name(args.param)
    values = [float(v) for v in args.values.split(",") if v.strip() != ""]
    if not values:
        raise CliError("--values must list at least one number")
    req = {"experiment": _experiment_request(args), "param": param, "values": values}
    result = _post(args.server, "/sweep", req)
    out = json.dumps(result, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    for point in result["points"]:
        agg = point["aggregates"]
        print(
            f"{param}={point['value']}: v={agg['v']['mean']:.4f} "
            f"count_error={agg['count_error']['mean']:.3f}",
            file=sys.stderr,
        )
    return 0


def _read_labels_file(path: str) -> dict[str, str]:
    p = Path(path)
    labels: dict[str, str] = {}
    if p.suffix == ".jsonl":
        with p.open(encoding="utf-8") as fh:
            for i, line in enumerate(fh):
                if not line.strip():
                    continue
                obj = json.loads(line)
                labels[str(obj.get("id", i))] = obj.get("label")
    else:
        with p.open(encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or "docId" not in reader.fieldnames or "label" not in reader.fieldnames:
                raise CliError(f"{path}: labels CSV needs docId,label columns")
            for row in reader:
                labels[row["docId"]] = row["label"]
    return labels


def _cmd_evaluate(args) -> int:
    from .clusters import read_assignment_csv

    doc_ids, _, clusters = read_assignment_csv(args.assignments)
    label_map = _read_labels_file(args.labels)
    missing = [d for d in doc_ids if d not in label_map]
    if missing:
        raise CliError(f"labels file is missing {len(missing)} document ids (first: {missing[0]!r})")
    req = {
        "clusterIndices": [int(c) for c in clusters],
        "labels": [label_map[d] for d in doc_ids],
    }
    result = _post(args.server, "/evaluate", req)
    sys.stdout.write(json.dumps(result, indent=2, sort_keys=True) + "\n")
    return 0


def _cmd_wordlist(args) -> int:
    req = {"dataset": _dataset_spec(args), "size": args.size}
    result = _post(args.server, "/wordlist", req)
    rows = [(e["term"], e["score"], e["rank"]) for e in result["entries"]]
    if args.out:
        with Path(args.out).open("w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["term", "score", "rank"])
            w.writerows(rows)
    else:
        w = csv.writer(sys.stdout)
        w.writerow(["term", "score", "rank"])
        w.writerows(rows)
    return 0


def _cmd_index(args) -> int:
    req = {"dataset": _dataset_spec(args)}
    result = _post(args.server, "/index", req)
    dump = json.dumps(result["dump"], sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(dump, encoding="utf-8")
    print(
        f"indexed {result['doc_count']} documents, {result['vocabulary']} terms, "
        f"labels: {', '.join(result['label_names']) or 'none'}",
        file=sys.stderr,
    )
    return 0


def _cmd_synth(args) -> int:
    from .synth import preset_corpus

    corpus = preset_corpus(args.preset, seed=args.corpus_seed, docs_per_class=args.docs_per_class)
    with Path(args.out).open("w", encoding="utf-8") as fh:
        for doc in corpus.documents:
            text = " ".join(t for term, n in sorted(doc.terms.items()) for t in [term] * n)
            rec = {"id": doc.id, "text": text}
            if doc.label is not None:
                rec["label"] = doc.label
            fh.write(json.dumps(rec) + "\n")
    print(f"wrote {len(corpus)} documents to {args.out}", file=sys.stderr)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("queryclust.service:app", host=args.host, port=args.port)
    return 0


# -- parser ------------------------------------------------------------------


def _add_dataset_args(p: argparse.ArgumentParser, positional_corpus: bool = True) -> None:
    if positional_corpus:
        p.add_argument("corpus", nargs="?", help="corpus file or directory")
    p.add_argument("--format", choices=CORPUS_FORMATS, help="corpus format for a file/dir source")
    p.add_argument("--text-field", default="text")
    p.add_argument("--label-field", default="label")
    p.add_argument("--id-field", default="id")
    p.add_argument("--preset", choices=PRESETS, default=None, help="synthetic dataset preset")
    p.add_argument("--corpus-seed", type=int, default=0)
    p.add_argument("--docs-per-class", type=int, default=None)
    p.add_argument("--n-per-category", type=int, default=None, help="sample this many docs per category")
    p.add_argument("--sample-seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="queryclust",
        description="Cluster documents with evolved disjunctive search queries.",
    )
    parser.add_argument("--server", default=None, help="remote service URL (default: run in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_experiment_args(p: argparse.ArgumentParser, modes=MODES) -> None:
        p.add_argument("--config", help="experiment config JSON (flags override)")
        p.add_argument("--mode", choices=modes, default=None)
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--runs", type=int, default=None)
        p.add_argument("--seed", type=int, default=None, help="base run seed")
        p.add_argument("--threshold", type=float, default=None, help="intersect ratio threshold")
        p.add_argument("--k-penalty", type=float, default=None)
        p.add_argument("--generations", type=int, default=None)
        p.add_argument("--population", type=int, default=None)
        p.add_argument("--wordlist-size", type=int, default=None)
        p.add_argument("--knn-k", type=int, default=None)
        p.add_argument("--max-features", type=int, default=None)

    p = sub.add_parser("cluster", help="run a seeded multi-run clustering experiment")
    _add_dataset_args(p)
    add_experiment_args(p)
    p.add_argument("--out", help="report JSON path (timing goes to a .timing.json sidecar)")
    p.add_argument("--csv", help="also write a per-run CSV")
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("compare", help="esq vs k-means++ on one dataset")
    _add_dataset_args(p)
    add_experiment_args(p, modes=("esq-fixed", "esq-discovered"))
    p.add_argument("--out", help="write full JSON result here")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("sweep", help="re-run an experiment while varying one parameter")
    _add_dataset_args(p)
    add_experiment_args(p)
    p.add_argument("--param", required=True, help=f"one of {', '.join(SWEEPABLE)}")
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--out", help="write sweep JSON here")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("evaluate", help="score an assignment CSV against ground-truth labels")
    p.add_argument("--assignments", required=True, help="CSV: docId,label,clusterIndex,assignedBy")
    p.add_argument("--labels", required=True, help="labels file (CSV docId,label or JSONL)")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("wordlist", help="dump the scored candidate word list as CSV")
    _add_dataset_args(p)
    p.add_argument("--size", type=int, default=100)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=_cmd_wordlist)

    p = sub.add_parser("index", help="build an inverted index and dump it as JSON")
    _add_dataset_args(p)
    p.add_argument("--out", help="index dump path")
    p.set_defaults(func=_cmd_index)

    p = sub.add_parser("synth", help="generate a synthetic corpus as JSONL")
    p.add_argument("--preset", choices=PRESETS, required=True)
    p.add_argument("--corpus-seed", type=int, default=0)
    p.add_argument("--docs-per-class", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
