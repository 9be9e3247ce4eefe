"""HTTP review API for the human-verification workflow.

Serves the sample plan, pair details (metadata, scores, raw and normalized
contents), the rubric, label submission, and the live calibration table.
The companion browser UI is a pure client of these endpoints; the CLI
``label`` subcommand writes through the same store.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, field_validator

from . import analysis, corpus, normalize, pairwise, verify
from .rundir import RunDir


class LabelBody(BaseModel):
    metric: str
    group: str
    bucket_lo: float
    label: str
    annotator: str
    rubric_notes: list[str] = []

    @field_validator("label")
    @classmethod
    def _label_valid(cls, v):
        if v not in verify.LABELS:
            raise ValueError(f"label must be one of {verify.LABELS}")
        return v

    @field_validator("annotator")
    @classmethod
    def _annotator_nonempty(cls, v):
        if not v.strip():
            raise ValueError("annotator must be non-empty")
        return v


class ReviewState:
    """Lazily loaded read views over a run directory plus the label store."""

    def __init__(self, run_dir: str | Path):
        self.run = RunDir(run_dir)
        self._corpus = None
        self._scores: dict = {}

    @property
    def corpus_store(self):
        if self._corpus is None:
            self._corpus = corpus.load_corpus(self.run.corpus)
        return self._corpus

    def plan(self):
        if not self.run.plan_path.exists():
            raise HTTPException(status_code=409, detail="sample plan has not been generated; run 'sample' first")
        return verify.load_plan(self.run.plan_path)

    def labels(self) -> verify.LabelStore:
        return verify.LabelStore(self.run.labels_path)

    def scores_for(self, group: str, metric: str) -> list:
        key = (group, metric)
        if key not in self._scores:
            try:
                self._scores[key] = pairwise.load_scores(self.run.scores, group, metric)
            except FileNotFoundError:
                self._scores[key] = []
        return self._scores[key]

    def pair_scores(self, a: str, b: str) -> dict:
        found = {}
        for group in pairwise.GROUPS:
            for metric in pairwise.METRICS:
                for rec in self.scores_for(group, metric):
                    if rec["a"] == a and rec["b"] == b:
                        found[metric] = {"score": rec["score"], "group": group}
        return found


def _pair_id(a: str, b: str) -> str:
    return f"{a}~{b}"


def _split_pair_id(pair_id: str) -> tuple:
    parts = pair_id.split("~")
    if len(parts) != 2:
        raise HTTPException(status_code=404, detail=f"unknown pair {pair_id!r}")
    return parts[0], parts[1]


def _repo_panel(record, docs_dir: Path) -> dict:
    files = []
    try:
        rels = normalize.collect_source_files(record.local_path)
    except IOError:
        rels = []
    for rel in rels:
        p = Path(record.local_path) / rel
        try:
            size = p.stat().st_size
        except OSError:
            size = 0
        files.append({"path": rel, "bytes": size})
    norm_path = docs_dir / f"{record.repo_id}.norm"
    normalized = norm_path.read_text(errors="replace") if norm_path.exists() else ""
    return {
        "repo_id": record.repo_id,
        "ecosystem": record.ecosystem,
        "developer_key": record.developer_key,
        "source_url": record.source_url,
        "display_name": record.display_name,
        "primary_language": record.primary_language,
        "files": files,
        "normalized": normalized,
    }


def create_app(run_dir: str | Path, ui_dir: str | Path | None = None) -> FastAPI:
    state = ReviewState(run_dir)
    app = FastAPI(title="cloneaudit review API")

    @app.get("/plan")
    def get_plan():
        plan = state.plan()
        current = {
            (lab["a"], lab["b"], lab["metric"], lab["group"]): lab
            for lab in state.labels().current()
        }
        strata = []
        for s in plan.strata:
            labeled = sum(
                1
                for a, b in s.sampled_pairs
                if (a, b, s.metric, s.group) in current
            )
            strata.append(
                {
                    "metric": s.metric,
                    "group": s.group,
                    "bucket_lo": s.bucket_lo,
                    "bucket_hi": s.bucket_hi,
                    "total_pairs": s.total_pairs,
                    "sampled": len(s.sampled_pairs),
                    "labeled": labeled,
                }
            )
        return {"seed": plan.seed, "per_bucket": plan.per_bucket, "strata": strata}

    @app.get("/pairs")
    def get_pairs(metric: str, group: str, bucket: float):
        plan = state.plan()
        stratum = plan.stratum(metric, group, bucket)
        if stratum is None:
            raise HTTPException(status_code=404, detail="unknown stratum")
        current = {
            (lab["a"], lab["b"]): lab["label"]
            for lab in state.labels().current()
            if lab["metric"] == metric and lab["group"] == group
        }
        pairs = []
        for a, b in stratum.sampled_pairs:
            scores = state.pair_scores(a, b)
            pairs.append(
                {
                    "pair_id": _pair_id(a, b),
                    "a": a,
                    "b": b,
                    "scores": scores,
                    "label": current.get((a, b)),
                }
            )
        return {"metric": metric, "group": group, "bucket_lo": bucket, "pairs": pairs}

    @app.get("/pair/{pair_id}")
    def get_pair(pair_id: str):
        a, b = _split_pair_id(pair_id)
        records = state.corpus_store.by_id()
        if a not in records or b not in records:
            raise HTTPException(status_code=404, detail=f"unknown pair {pair_id!r}")
        store = state.labels()
        history = [
            {
                "label": lab.label,
                "annotator": lab.annotator,
                "metric": lab.metric,
                "timestamp": lab.timestamp,
            }
            for metric in pairwise.METRICS
            for lab in store.history_for(a, b, metric)
        ]
        return {
            "pair_id": pair_id,
            "a": _repo_panel(records[a], state.run.docs),
            "b": _repo_panel(records[b], state.run.docs),
            "scores": state.pair_scores(a, b),
            "label_history": history,
        }

    @app.get("/pair/{pair_id}/file")
    def get_pair_file(pair_id: str, repo: str, path: str):
        a, b = _split_pair_id(pair_id)
        records = state.corpus_store.by_id()
        if repo not in (a, b) or repo not in records:
            raise HTTPException(status_code=404, detail="unknown repo for pair")
        root = Path(records[repo].local_path).resolve()
        target = (root / path).resolve()
        if not str(target).startswith(str(root)) or not target.is_file():
            raise HTTPException(status_code=404, detail="unknown file")
        return {"repo": repo, "path": path, "content": target.read_text(errors="replace")}

    @app.post("/pair/{pair_id}/label")
    def post_label(pair_id: str, body: LabelBody):
        a, b = _split_pair_id(pair_id)
        plan = state.plan()
        label = verify.VerificationLabel(
            pair_a=a,
            pair_b=b,
            metric=body.metric,
            group=body.group,
            bucket_lo=body.bucket_lo,
            label=body.label,
            annotator=body.annotator,
            rubric_notes=tuple(body.rubric_notes),
        )
        store = state.labels()
        try:
            store.record(plan, label)
        except verify.PlanError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {"status": "recorded", "pair_id": pair_id, "label": body.label}

    @app.get("/calibration")
    def get_calibration():
        state.plan()  # 409 if absent
        labels = state.labels().current()
        rows = []
        for group in pairwise.GROUPS:
            for metric in pairwise.METRICS:
                records = state.scores_for(group, metric)
                if not records:
                    continue
                counts = analysis.bucketize(records)
                for row in analysis.calibration_table(labels, counts, metric, group):
                    rows.append(
                        {
                            "metric": row.metric,
                            "group": row.group,
                            "bucket_lo": row.bucket.lo,
                            "bucket_hi": row.bucket.hi,
                            "total_pairs": row.total_pairs,
                            "sampled": row.sampled,
                            "clones": row.clones,
                            "proportion": row.proportion,
                            "ci_lo": row.ci_lo,
                            "ci_hi": row.ci_hi,
                        }
                    )
        return {"rows": rows}

    @app.get("/rubric")
    def get_rubric():
        return {"steps": list(verify.RUBRIC_STEPS)}

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve_review_api(run_dir: str | Path, port: int = 8100, ui_dir: str | Path | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(run_dir, ui_dir), host="127.0.0.1", port=port)
