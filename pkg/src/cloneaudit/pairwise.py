"""Pair enumeration and scoring.

Enumerates repository pairs per comparison group with the same-developer
exclusion, scores every pair under both metrics, and persists one
newline-delimited score file per (group, metric).  Output is sorted before
writing, so files are byte-identical regardless of worker count.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .ctph import FuzzyHash, comparison_grams, ctph_compare, ctph_digest
from .tokensim import jaccard, minhash_estimate, minhash_signature

GROUPS = ("mcp-mcp", "skills-skills", "mcp-skills")
METRICS = ("jaccard", "ctph")

_GROUP_ECOSYSTEMS = {
    "mcp-mcp": ("MCP", "MCP"),
    "skills-skills": ("Skills", "Skills"),
    "mcp-skills": ("MCP", "Skills"),
}


class IntegrityError(RuntimeError):
    """A pair references a repository without a stored document or hash."""


@dataclass(frozen=True)
class ScoredRepo:
    """Everything scoring needs about one repository, precomputed once."""

    repo_id: str
    ecosystem: str
    developer_key: str
    token_set: frozenset
    fuzzy: FuzzyHash
    grams: frozenset
    minhash: tuple = ()

    @classmethod
    def from_document(cls, doc, ecosystem: str, developer_key: str, minhash_k: int = 0):
        fh = ctph_digest(doc.byte_stream)
        sig = tuple(minhash_signature(doc.token_set, minhash_k)) if minhash_k else ()
        return cls(
            repo_id=doc.repo_id,
            ecosystem=ecosystem,
            developer_key=developer_key,
            token_set=doc.token_set,
            fuzzy=fh,
            grams=comparison_grams(fh),
            minhash=sig,
        )


def enumerate_pairs(repos: list, group: str, exclude_same_developer: bool = True) -> list:
    """Unordered qualifying pairs for a group, sorted by pair id.

    Within-ecosystem groups yield all unordered pairs; the cross group
    yields the bipartite product.  Pairs sharing a developer key are
    omitted when the exclusion is on.
    """
    eco_a, eco_b = _GROUP_ECOSYSTEMS[group]
    by_id = {r.repo_id: r for r in repos}
    if eco_a == eco_b:
        ids = sorted(r.repo_id for r in repos if r.ecosystem == eco_a)
        candidates = [
            (ids[i], ids[j]) for i in range(len(ids)) for j in range(i + 1, len(ids))
        ]
    else:
        left = sorted(r.repo_id for r in repos if r.ecosystem == eco_a)
        right = sorted(r.repo_id for r in repos if r.ecosystem == eco_b)
        candidates = [tuple(sorted((a, b))) for a in left for b in right]
        candidates.sort()
    if exclude_same_developer:
        candidates = [
            (a, b)
            for a, b in candidates
            if by_id[a].developer_key != by_id[b].developer_key
        ]
    return candidates


def score_pair(a: ScoredRepo, b: ScoredRepo, metric: str) -> float:
    if metric == "jaccard":
        return jaccard(a.token_set, b.token_set)
    if metric == "ctph":
        # Disjoint signature grams guarantee a zero score; skip the edit
        # distance for the overwhelmingly common no-overlap case.
        if a.grams.isdisjoint(b.grams):
            return 0.0
        return float(ctph_compare(a.fuzzy, b.fuzzy))
    raise ValueError(f"unknown metric {metric!r}")


_WORKER_STATE: dict = {}


def _init_worker(repo_map, metrics, jaccard_cutoff):
    _WORKER_STATE["repos"] = repo_map
    _WORKER_STATE["metrics"] = metrics
    _WORKER_STATE["jaccard_cutoff"] = jaccard_cutoff


def _score_shard(args):
    shard_index, pairs = args
    repos = _WORKER_STATE["repos"]
    cutoff = _WORKER_STATE["jaccard_cutoff"]
    out = []
    for metric in _WORKER_STATE["metrics"]:
        for a, b in pairs:
            ra, rb = repos[a], repos[b]
            if metric == "jaccard" and cutoff is not None:
                est = minhash_estimate(list(ra.minhash), list(rb.minhash))
                score = est if est < cutoff else score_pair(ra, rb, metric)
            else:
                score = score_pair(ra, rb, metric)
            out.append((metric, a, b, score))
    return shard_index, out


def score_all(
    pairs: list,
    repos: dict,
    group: str,
    metrics: tuple = METRICS,
    workers: int = 1,
    minhash_prefilter_margin: float | None = None,
    jaccard_threshold: float = 80.0,
) -> list:
    """Score every pair under every metric.

    Returns records sorted by (metric, pair), independent of scheduling.
    With ``minhash_prefilter_margin`` set, Jaccard is first estimated from
    MinHash signatures; pairs estimated at or above threshold - margin are
    exactly rescored, pairs below carry the estimate.  Default mode is
    fully exact.
    """
    for a, b in pairs:
        for rid in (a, b):
            if rid not in repos:
                raise IntegrityError(f"no stored document for repository {rid}")

    cutoff = None
    if minhash_prefilter_margin is not None:
        cutoff = jaccard_threshold - minhash_prefilter_margin
        for repo in repos.values():
            if not repo.minhash:
                raise IntegrityError(
                    f"prefilter requested but {repo.repo_id} has no MinHash signature"
                )

    records: list = []
    if workers <= 1 or len(pairs) < 1024:
        _init_worker(repos, metrics, cutoff)
        results = [_score_shard((0, pairs))]
    else:
        shard_size = max(1, (len(pairs) + workers * 4 - 1) // (workers * 4))
        shards = [
            (i, pairs[off : off + shard_size])
            for i, off in enumerate(range(0, len(pairs), shard_size))
        ]
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker, initargs=(repos, metrics, cutoff)
        ) as pool:
            results = list(pool.map(_score_shard, shards))
    for _, shard_records in sorted(results):
        records.extend(shard_records)

    records.sort(key=lambda r: (r[0], r[1], r[2]))
    return [
        {"a": a, "b": b, "group": group, "metric": metric, "score": score}
        for metric, a, b, score in records
    ]


def save_scores(records: list, scores_dir: str | Path, group: str) -> dict:
    """One ndjson file per (group, metric); returns per-metric counts."""
    scores_dir = Path(scores_dir)
    scores_dir.mkdir(parents=True, exist_ok=True)
    counts: dict = {}
    handles: dict = {}
    try:
        for rec in records:
            metric = rec["metric"]
            if metric not in handles:
                handles[metric] = open(scores_dir / f"{group}.{metric}.ndjson", "w")
            handles[metric].write(
                json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n"
            )
            counts[metric] = counts.get(metric, 0) + 1
    finally:
        for fh in handles.values():
            fh.close()
    return counts


def load_scores(scores_dir: str | Path, group: str, metric: str) -> list:
    path = Path(scores_dir) / f"{group}.{metric}.ndjson"
    records = []
    with open(path) as fh:
        for line in fh:
            if line.strip():
                records.append(json.loads(line))
    return records


def score_histogram(records: list, bin_width: float = 1.0) -> list:
    """Counts per half-open bin [k*w, (k+1)*w), top bin closed at 100."""
    if bin_width <= 0 or (100 / bin_width) != int(100 / bin_width):
        raise ValueError(f"bin width {bin_width} does not divide 100 evenly")
    n_bins = int(100 / bin_width)
    counts = [0] * n_bins
    for rec in records:
        score = rec["score"]
        idx = int(score // bin_width)
        if idx >= n_bins:  # score == 100 lands in the top closed bin
            idx = n_bins - 1
        counts[idx] += 1
    return counts


def histogram_rows(counts: list, bin_width: float) -> list:
    return [
        {"bin_lo": i * bin_width, "bin_hi": (i + 1) * bin_width, "count": c}
        for i, c in enumerate(counts)
    ]
