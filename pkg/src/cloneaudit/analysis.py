"""Score analysis.

Buckets pair scores, extracts high-similarity candidates, clusters them
into connected components, and calibrates per-bucket clone rates from
human labels with Wilson confidence intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

BUCKET_EDGES = (0.0, 20.0, 40.0, 60.0, 80.0, 100.0)


@dataclass(frozen=True)
class Bucket:
    """[lo, hi) score stratum; the top bucket also includes hi."""

    lo: float
    hi: float
    closed_hi: bool

    def contains(self, score: float) -> bool:
        if self.closed_hi:
            return self.lo <= score <= self.hi
        return self.lo <= score < self.hi

    @property
    def label(self) -> str:
        return f"{self.lo:g}-{self.hi:g}"


def standard_buckets(edges: tuple = BUCKET_EDGES) -> list:
    return [
        Bucket(edges[i], edges[i + 1], closed_hi=(i == len(edges) - 2))
        for i in range(len(edges) - 1)
    ]


def bucket_for(score: float, buckets: list | None = None) -> Bucket:
    for bucket in buckets or standard_buckets():
        if bucket.contains(score):
            return bucket
    raise ValueError(f"score {score} outside [0, 100]")


def bucketize(records: list, buckets: list | None = None) -> dict:
    """Bucket -> pair count; every record lands in exactly one bucket."""
    buckets = buckets or standard_buckets()
    counts = {b: 0 for b in buckets}
    for rec in records:
        counts[bucket_for(rec["score"], buckets)] += 1
    return counts


def extract_candidates(records: list, threshold: float = 80.0) -> list:
    """All pairs scoring >= threshold, best first."""
    if not 0 <= threshold <= 100:
        raise ValueError(f"threshold {threshold} outside [0, 100]")
    hits = [r for r in records if r["score"] >= threshold]
    hits.sort(key=lambda r: (-r["score"], r["a"], r["b"]))
    return hits


class _UnionFind:
    """Union by rank with path compression."""

    def __init__(self):
        self.parent: dict = {}
        self.rank: dict = {}

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.rank[x] = 0

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:  # path compression
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1


def cluster_candidates(candidates: list) -> list:
    """Connected components of the candidate-pair graph, largest first.

    Each component is a sorted list of repo ids; singletons cannot occur
    because every node arrives on an edge.
    """
    uf = _UnionFind()
    for rec in candidates:
        uf.add(rec["a"])
        uf.add(rec["b"])
        uf.union(rec["a"], rec["b"])
    components: dict = {}
    for node in uf.parent:
        components.setdefault(uf.find(node), []).append(node)
    clusters = [sorted(members) for members in components.values()]
    clusters.sort(key=lambda c: (-len(c), c[0]))
    return clusters


@dataclass(frozen=True)
class PrevalenceReport:
    """One Table-style prevalence row for a (metric, group, threshold)."""

    metric: str
    group: str
    threshold: float
    candidate_pairs: int
    repos_involved: int
    largest_cluster: int


def prevalence_report(candidates: list, metric: str, group: str, threshold: float) -> PrevalenceReport:
    repos = {r["a"] for r in candidates} | {r["b"] for r in candidates}
    clusters = cluster_candidates(candidates)
    return PrevalenceReport(
        metric=metric,
        group=group,
        threshold=threshold,
        candidate_pairs=len(candidates),
        repos_involved=len(repos),
        largest_cluster=len(clusters[0]) if clusters else 0,
    )


def wilson_interval(k: int, n: int, z: float = 1.96) -> tuple:
    """95% Wilson score interval for k successes out of n, clamped to [0,1].

    Stable at small n and at proportions near 0 or 1, where the normal
    approximation degenerates.
    """
    if n < 1:
        raise ValueError("sample count must be >= 1")
    if not 0 <= k <= n:
        raise ValueError(f"clone count {k} outside [0, {n}]")
    p = k / n
    z2 = z * z
    denom = 1 + z2 / n
    center = (p + z2 / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom
    lo = max(0.0, center - half)
    hi = min(1.0, center + half)
    # At the extremes the bound coincides with the point estimate exactly;
    # snap to avoid float rounding placing p outside the interval.
    if k == 0:
        lo = 0.0
    if k == n:
        hi = 1.0
    return (lo, hi)


@dataclass(frozen=True)
class CalibrationRow:
    """One calibration row: verified clone rate for a score bucket."""

    metric: str
    group: str
    bucket: Bucket
    total_pairs: int
    sampled: int
    clones: int
    proportion: float | None
    ci_lo: float | None
    ci_hi: float | None


def calibration_table(labels: list, bucket_counts: dict, metric: str, group: str) -> list:
    """Rows per bucket from current labels and bucketize() totals.

    ``labels`` are current-label dicts with keys metric, group, bucket_lo,
    label.  Buckets nobody sampled carry sampled=0 and no interval.
    """
    by_bucket: dict = {}
    for lab in labels:
        if lab["metric"] != metric or lab["group"] != group:
            continue
        sampled, clones = by_bucket.get(lab["bucket_lo"], (0, 0))
        by_bucket[lab["bucket_lo"]] = (sampled + 1, clones + (1 if lab["label"] == "clone" else 0))
    rows = []
    for bucket, total in bucket_counts.items():
        sampled, clones = by_bucket.get(bucket.lo, (0, 0))
        if sampled:
            lo, hi = wilson_interval(clones, sampled)
            rows.append(
                CalibrationRow(metric, group, bucket, total, sampled, clones, clones / sampled, lo, hi)
            )
        else:
            rows.append(CalibrationRow(metric, group, bucket, total, 0, 0, None, None, None))
    rows.sort(key=lambda r: r.bucket.lo)
    return rows
