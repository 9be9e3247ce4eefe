"""Human verification: stratified sampling and the clone-label store.

Samples candidate pairs per (metric, group, bucket) stratum with a seeded
generator so plans are reproducible, and keeps labels in an append-only
log with a derived current view, so every human decision stays auditable.
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path

from .analysis import bucket_for, standard_buckets

RUBRIC_STEPS = (
    "Repository structure: compare directory layout, file organization, and "
    "naming conventions; strong structural similarity is supporting evidence "
    "only.",
    "Core implementation overlap: inspect key source files (excluding "
    "manifests, generated files, and trivial boilerplate) for shared "
    "function definitions, control flow, API usage, tool registration, "
    "request/response handling, authentication code, and module composition.",
    "Boilerplate filtering: discount overlap explained only by framework "
    "scaffolding, dependency files, package metadata, generated files, or "
    "initialization code.",
    "Functional equivalence: check whether the repositories expose "
    "equivalent tool behavior or implement the same core functionality even "
    "if names, comments, or local organization differ.",
    "Divergence assessment: renaming, configuration edits, minor parameter "
    "changes, or localized refactoring are compatible with a clone label; "
    "major architectural changes are not.",
    "Final label: assign clone if multiple forms of evidence indicate "
    "substantive implementation reuse; otherwise assign non-clone.",
)

LABELS = ("clone", "non-clone")


class PlanError(ValueError):
    """Label submissions must reference pairs that are in the sample plan."""


@dataclass(frozen=True)
class Stratum:
    metric: str
    group: str
    bucket_lo: float
    bucket_hi: float
    total_pairs: int
    sampled_pairs: tuple  # of (a, b) id pairs

    @property
    def key(self) -> tuple:
        return (self.metric, self.group, self.bucket_lo)


@dataclass(frozen=True)
class SamplePlan:
    seed: int
    per_bucket: int
    strata: tuple

    def stratum(self, metric: str, group: str, bucket_lo: float):
        for s in self.strata:
            if s.key == (metric, group, bucket_lo):
                return s
        return None

    def contains(self, metric: str, group: str, bucket_lo: float, a: str, b: str) -> bool:
        s = self.stratum(metric, group, bucket_lo)
        return s is not None and (a, b) in set(map(tuple, s.sampled_pairs))


def _stratum_rng(seed: int, metric: str, group: str, bucket_lo: float) -> random.Random:
    # One independent stream per stratum, stable across runs and platforms.
    material = f"{seed}:{metric}:{group}:{bucket_lo:g}".encode()
    return random.Random(int.from_bytes(hashlib.sha256(material).digest()[:8], "big"))


def stratified_sample(score_records: dict, per_bucket: int = 20, seed: int = 0) -> SamplePlan:
    """Uniform per-stratum samples without replacement.

    ``score_records`` maps (metric, group) -> list of score record dicts.
    Strata with at most ``per_bucket`` pairs are fully enumerated.
    """
    if per_bucket < 1:
        raise ValueError("per_bucket must be >= 1")
    buckets = standard_buckets()
    strata = []
    for (metric, group), records in sorted(score_records.items()):
        per_bucket_pairs: dict = {b: [] for b in buckets}
        for rec in records:
            per_bucket_pairs[bucket_for(rec["score"], buckets)].append((rec["a"], rec["b"]))
        for bucket in buckets:
            pool = sorted(per_bucket_pairs[bucket])
            if len(pool) <= per_bucket:
                chosen = pool
            else:
                rng = _stratum_rng(seed, metric, group, bucket.lo)
                chosen = sorted(rng.sample(pool, per_bucket))
            strata.append(
                Stratum(
                    metric=metric,
                    group=group,
                    bucket_lo=bucket.lo,
                    bucket_hi=bucket.hi,
                    total_pairs=len(pool),
                    sampled_pairs=tuple(chosen),
                )
            )
    return SamplePlan(seed=seed, per_bucket=per_bucket, strata=tuple(strata))


def save_plan(plan: SamplePlan, path: str | Path) -> None:
    payload = {
        "seed": plan.seed,
        "per_bucket": plan.per_bucket,
        "strata": [
            {
                "metric": s.metric,
                "group": s.group,
                "bucket_lo": s.bucket_lo,
                "bucket_hi": s.bucket_hi,
                "total_pairs": s.total_pairs,
                "sampled_pairs": [list(p) for p in s.sampled_pairs],
            }
            for s in plan.strata
        ],
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n")


def load_plan(path: str | Path) -> SamplePlan:
    payload = json.loads(Path(path).read_text())
    strata = tuple(
        Stratum(
            metric=s["metric"],
            group=s["group"],
            bucket_lo=s["bucket_lo"],
            bucket_hi=s["bucket_hi"],
            total_pairs=s["total_pairs"],
            sampled_pairs=tuple(tuple(p) for p in s["sampled_pairs"]),
        )
        for s in payload["strata"]
    )
    return SamplePlan(seed=payload["seed"], per_bucket=payload["per_bucket"], strata=strata)


@dataclass(frozen=True)
class VerificationLabel:
    pair_a: str
    pair_b: str
    metric: str
    group: str
    bucket_lo: float
    label: str
    annotator: str
    rubric_notes: tuple = ()
    timestamp: float = field(default_factory=time.time)

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"label must be one of {LABELS}")
        if not self.annotator.strip():
            raise ValueError("annotator must be non-empty")


class LabelStore:
    """Append-only label log with a derived current-label view.

    A later submission for the same (pair, metric) supersedes the earlier
    one; history is never rewritten.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._history: list = []
        if self.path.exists():
            with open(self.path) as fh:
                for line in fh:
                    if line.strip():
                        self._history.append(VerificationLabel(**json.loads(line)))

    def record(self, plan: SamplePlan, label: VerificationLabel) -> None:
        if not plan.contains(label.metric, label.group, label.bucket_lo, label.pair_a, label.pair_b):
            raise PlanError(
                f"pair ({label.pair_a}, {label.pair_b}) is not in the sample plan for "
                f"{label.metric}/{label.group}/bucket {label.bucket_lo:g}"
            )
        self._append(label)

    def _append(self, label: VerificationLabel) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a") as fh:
            fh.write(json.dumps(asdict(label), sort_keys=True) + "\n")
        self._history.append(label)

    @property
    def history(self) -> list:
        return list(self._history)

    def current(self) -> list:
        """Latest label per (pair, metric, group), as plain dicts."""
        latest: dict = {}
        for lab in self._history:
            latest[(lab.pair_a, lab.pair_b, lab.metric, lab.group)] = lab
        return [
            {
                "a": lab.pair_a,
                "b": lab.pair_b,
                "metric": lab.metric,
                "group": lab.group,
                "bucket_lo": lab.bucket_lo,
                "label": lab.label,
                "annotator": lab.annotator,
            }
            for lab in latest.values()
        ]

    def history_for(self, a: str, b: str, metric: str) -> list:
        return [
            lab for lab in self._history
            if lab.pair_a == a and lab.pair_b == b and lab.metric == metric
        ]

    def export_labels(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            for lab in self._history:
                fh.write(json.dumps(asdict(lab), sort_keys=True) + "\n")

    def import_labels(self, path: str | Path, plan: SamplePlan) -> dict:
        """Import a label file; invalid rows are reported, valid rows kept.

        Importing the same file twice leaves the current view unchanged
        (exact duplicate rows are skipped).
        """
        imported = 0
        errors = []
        seen = {json.dumps(asdict(lab), sort_keys=True) for lab in self._history}
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    lab = VerificationLabel(**json.loads(line))
                    if json.dumps(asdict(lab), sort_keys=True) in seen:
                        continue
                    self.record(plan, lab)
                    seen.add(json.dumps(asdict(lab), sort_keys=True))
                    imported += 1
                except (TypeError, ValueError, PlanError) as exc:
                    errors.append({"line": lineno, "error": str(exc)})
        return {"imported": imported, "errors": errors}
