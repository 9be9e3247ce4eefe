"""Pipeline CLI.

Subcommands drive the stages of a run directory: ingest -> normalize ->
score -> analyze -> sample -> label/serve -> report.  ``all`` chains every
stage except ``serve``.  Stage outputs land in fixed subdirectories so a
stage can be re-run in isolation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis, corpus, metadata, normalize, pairwise, report, verify
from .rundir import RunDir

DEFAULT_MIN_TOKENS = 50
DEFAULT_THRESHOLD = 80.0
DEFAULT_PER_BUCKET = 20
DEFAULT_BIN_WIDTH = 1.0


def _write_config(run: RunDir, args: argparse.Namespace) -> dict:
    config = {
        "manifest": getattr(args, "manifest", None),
        "out": str(run.root),
        "min_tokens": getattr(args, "min_tokens", DEFAULT_MIN_TOKENS),
        "threshold": getattr(args, "threshold", DEFAULT_THRESHOLD),
        "bucket_edges": list(analysis.BUCKET_EDGES),
        "per_bucket": getattr(args, "per_bucket", DEFAULT_PER_BUCKET),
        "seed": getattr(args, "seed", 0),
        "metrics": sorted(getattr(args, "metrics", list(pairwise.METRICS))),
        "exclude_same_developer": not getattr(args, "no_exclude_same_developer", False),
        "jobs": getattr(args, "jobs", 1),
    }
    run.root.mkdir(parents=True, exist_ok=True)
    run.config_path.write_text(json.dumps(config, sort_keys=True, indent=1) + "\n")
    return config


def _load_config(run: RunDir) -> dict:
    if run.config_path.exists():
        return json.loads(run.config_path.read_text())
    return {}


def stage_ingest(run: RunDir, manifest: str) -> corpus.CorpusStore:
    store = corpus.ingest_manifest(manifest)
    corpus.save_corpus(store, run.corpus)
    return store


def stage_normalize(run: RunDir) -> int:
    run.require(run.corpus / "records.ndjson", "ingest")
    store = corpus.load_corpus(run.corpus)
    n = 0
    for record in store.records:
        doc = normalize.build_document(record.repo_id, record.local_path)
        normalize.save_document(doc, run.docs)
        n += 1
    return n


def _qualifying_repos(run: RunDir, min_tokens: int) -> list:
    store = corpus.load_corpus(run.corpus)
    repos = []
    for record in store.records:
        doc = normalize.load_document(record.repo_id, run.docs)
        if normalize.passes_size_filter(doc, min_tokens):
            repos.append(
                pairwise.ScoredRepo.from_document(doc, record.ecosystem, record.developer_key)
            )
    return repos


def stage_score(
    run: RunDir,
    metrics: tuple = pairwise.METRICS,
    workers: int = 1,
    exclude_same_developer: bool = True,
    min_tokens: int = DEFAULT_MIN_TOKENS,
) -> dict:
    run.require(run.corpus / "records.ndjson", "ingest")
    store = corpus.load_corpus(run.corpus)
    for record in store.records:
        run.require(run.docs / f"{record.repo_id}.norm", "normalize")
    repos = _qualifying_repos(run, min_tokens)
    repo_map = {r.repo_id: r for r in repos}
    summary: dict = {"qualifying_repos": len(repos), "groups": {}}
    for group in pairwise.GROUPS:
        pairs = pairwise.enumerate_pairs(repos, group, exclude_same_developer)
        records = pairwise.score_all(pairs, repo_map, group, tuple(metrics), workers)
        counts = pairwise.save_scores(records, run.scores, group)
        summary["groups"][group] = counts
    (run.scores / "summary.json").write_text(json.dumps(summary, sort_keys=True, indent=1) + "\n")
    return summary


def stage_analyze(run: RunDir, threshold: float = DEFAULT_THRESHOLD, bin_width: float = DEFAULT_BIN_WIDTH) -> dict:
    run.require(run.scores / "summary.json", "score")
    run.analysis.mkdir(parents=True, exist_ok=True)
    out: dict = {"threshold": threshold, "bin_width": bin_width, "prevalence": [], "buckets": {}}
    for group in pairwise.GROUPS:
        for metric in pairwise.METRICS:
            path = run.scores / f"{group}.{metric}.ndjson"
            if not path.exists():
                continue
            records = pairwise.load_scores(run.scores, group, metric)
            counts = pairwise.score_histogram(records, bin_width)
            with open(run.analysis / f"hist_{group}_{metric}.json", "w") as fh:
                json.dump(pairwise.histogram_rows(counts, bin_width), fh)
            buckets = analysis.bucketize(records)
            out["buckets"][f"{group}/{metric}"] = {b.label: c for b, c in buckets.items()}
            candidates = analysis.extract_candidates(records, threshold)
            with open(run.analysis / f"candidates_{group}_{metric}.ndjson", "w") as fh:
                for rec in candidates:
                    fh.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")
            clusters = analysis.cluster_candidates(candidates)
            with open(run.analysis / f"clusters_{group}_{metric}.json", "w") as fh:
                json.dump(clusters, fh)
            prev = analysis.prevalence_report(candidates, metric, group, threshold)
            out["prevalence"].append(prev.__dict__)
    (run.analysis / "analysis.json").write_text(json.dumps(out, sort_keys=True, indent=1) + "\n")
    return out


def stage_metadata(run: RunDir) -> dict:
    run.require(run.corpus / "records.ndjson", "ingest")
    store = corpus.load_corpus(run.corpus)
    run.analysis.mkdir(parents=True, exist_ok=True)
    out: dict = {"descriptions": {}, "developer_concentration": {}}
    for eco in corpus.ECOSYSTEMS:
        stats = metadata.description_length_stats(store, eco)
        out["descriptions"][eco] = stats.__dict__
        rows = metadata.developer_concentration(store, eco)
        out["developer_concentration"][eco] = [r.__dict__ for r in rows]
    (run.analysis / "metadata.json").write_text(json.dumps(out, sort_keys=True, indent=1) + "\n")
    return out


def stage_sample(run: RunDir, per_bucket: int = DEFAULT_PER_BUCKET, seed: int = 0) -> verify.SamplePlan:
    run.require(run.scores / "summary.json", "score")
    score_records = {}
    for group in pairwise.GROUPS:
        for metric in pairwise.METRICS:
            path = run.scores / f"{group}.{metric}.ndjson"
            if path.exists():
                score_records[(metric, group)] = pairwise.load_scores(run.scores, group, metric)
    plan = verify.stratified_sample(score_records, per_bucket, seed)
    run.verify.mkdir(parents=True, exist_ok=True)
    verify.save_plan(plan, run.plan_path)
    return plan


def stage_label(run: RunDir, a: str, b: str, metric: str, group: str, bucket_lo: float,
                label: str, annotator: str, notes: tuple = ()) -> None:
    run.require(run.plan_path, "sample")
    plan = verify.load_plan(run.plan_path)
    store = verify.LabelStore(run.labels_path)
    store.record(
        plan,
        verify.VerificationLabel(
            pair_a=a, pair_b=b, metric=metric, group=group, bucket_lo=bucket_lo,
            label=label, annotator=annotator, rubric_notes=tuple(notes),
        ),
    )


def stage_report(run: RunDir, bin_width: float = DEFAULT_BIN_WIDTH) -> None:
    run.require(run.analysis / "analysis.json", "analyze")
    analysis_out = json.loads((run.analysis / "analysis.json").read_text())
    labels = []
    if run.labels_path.exists():
        labels = verify.LabelStore(run.labels_path).current()
    histograms = {}
    calibration = {}
    prevalence = [analysis.PrevalenceReport(**p) for p in analysis_out["prevalence"]]
    for group in pairwise.GROUPS:
        for metric in pairwise.METRICS:
            path = run.scores / f"{group}.{metric}.ndjson"
            if not path.exists():
                continue
            records = pairwise.load_scores(run.scores, group, metric)
            histograms[(group, metric)] = pairwise.score_histogram(records, bin_width)
            counts = analysis.bucketize(records)
            calibration[(group, metric)] = analysis.calibration_table(labels, counts, metric, group)
    config = _load_config(run)
    report.emit_report(run.report, histograms, prevalence, calibration, config, bin_width)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", required=True, help="run directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cloneaudit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="ingest a repository manifest")
    _add_common(p)
    p.add_argument("--manifest", required=True)

    p = sub.add_parser("normalize", help="build normalized documents")
    _add_common(p)

    p = sub.add_parser("score", help="score all pairs under both metrics")
    _add_common(p)
    p.add_argument("--metrics", nargs="+", default=list(pairwise.METRICS), choices=pairwise.METRICS)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--min-tokens", type=int, default=DEFAULT_MIN_TOKENS)
    p.add_argument("--no-exclude-same-developer", action="store_true")

    p = sub.add_parser("analyze", help="bucket scores, extract and cluster candidates")
    _add_common(p)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--bin-width", type=float, default=DEFAULT_BIN_WIDTH)

    p = sub.add_parser("metadata", help="description and developer-concentration statistics")
    _add_common(p)

    p = sub.add_parser("sample", help="draw the stratified verification sample")
    _add_common(p)
    p.add_argument("--per-bucket", type=int, default=DEFAULT_PER_BUCKET)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("label", help="record one verification label")
    _add_common(p)
    p.add_argument("--pair", required=True, help="pair as A~B repo ids")
    p.add_argument("--metric", required=True, choices=pairwise.METRICS)
    p.add_argument("--group", required=True, choices=pairwise.GROUPS)
    p.add_argument("--bucket", type=float, required=True, help="bucket lower edge")
    p.add_argument("--label", required=True, choices=verify.LABELS)
    p.add_argument("--annotator", required=True)
    p.add_argument("--note", action="append", default=[], help="rubric-step note; repeatable")

    p = sub.add_parser("serve", help="serve the review API (and UI, if built)")
    _add_common(p)
    p.add_argument("--port", type=int, default=8100)
    p.add_argument("--ui-dir", default=None)

    p = sub.add_parser("report", help="render report files and figures")
    _add_common(p)
    p.add_argument("--bin-width", type=float, default=DEFAULT_BIN_WIDTH)

    p = sub.add_parser("all", help="run every stage except serve")
    _add_common(p)
    p.add_argument("--manifest", required=True)
    p.add_argument("--metrics", nargs="+", default=list(pairwise.METRICS), choices=pairwise.METRICS)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--min-tokens", type=int, default=DEFAULT_MIN_TOKENS)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--bin-width", type=float, default=DEFAULT_BIN_WIDTH)
    p.add_argument("--per-bucket", type=int, default=DEFAULT_PER_BUCKET)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-exclude-same-developer", action="store_true")

    return parser


def main(argv: list | None = None) -> int:
    args = build_parser().parse_args(argv)
    run = RunDir(args.out)
    try:
        if args.command == "ingest":
            _write_config(run, args)
            store = stage_ingest(run, args.manifest)
            print(f"ingested {store.ingested} repositories "
                  f"({store.merged} merged, {store.dropped} dropped)")
        elif args.command == "normalize":
            n = stage_normalize(run)
            print(f"normalized {n} repositories")
        elif args.command == "score":
            summary = stage_score(
                run,
                metrics=tuple(args.metrics),
                workers=args.jobs,
                exclude_same_developer=not args.no_exclude_same_developer,
                min_tokens=args.min_tokens,
            )
            print(json.dumps(summary, sort_keys=True))
        elif args.command == "analyze":
            out = stage_analyze(run, args.threshold, args.bin_width)
            print(f"wrote analysis for {len(out['prevalence'])} (group, metric) pairs")
        elif args.command == "metadata":
            stage_metadata(run)
            print("wrote metadata statistics")
        elif args.command == "sample":
            plan = stage_sample(run, args.per_bucket, args.seed)
            print(f"sampled {sum(len(s.sampled_pairs) for s in plan.strata)} pairs "
                  f"across {len(plan.strata)} strata")
        elif args.command == "label":
            a, _, b = args.pair.partition("~")
            stage_label(run, a, b, args.metric, args.group, args.bucket,
                        args.label, args.annotator, tuple(args.note))
            print("label recorded")
        elif args.command == "serve":
            from .api import serve_review_api

            run.require(run.plan_path, "sample")
            serve_review_api(run.root, args.port, args.ui_dir)
        elif args.command == "report":
            stage_report(run, args.bin_width)
            print(f"report written to {run.report}")
        elif args.command == "all":
            _write_config(run, args)
            stage_ingest(run, args.manifest)
            stage_normalize(run)
            stage_score(
                run,
                metrics=tuple(args.metrics),
                workers=args.jobs,
                exclude_same_developer=not args.no_exclude_same_developer,
                min_tokens=args.min_tokens,
            )
            stage_analyze(run, args.threshold, args.bin_width)
            stage_metadata(run)
            stage_sample(run, args.per_bucket, args.seed)
            stage_report(run, args.bin_width)
            print(f"run complete: {run.root}")
    except (corpus.ManifestError, FileNotFoundError, IOError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
