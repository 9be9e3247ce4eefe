"""Metadata statistics: description lengths and developer concentration."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .normalize import normalize_text, tokenize

# Markdown emphasis, backticks, and link punctuation; stripped before
# token counting so formatting does not inflate description lengths.
_FORMATTING_RE = re.compile(r"[*_`~#>\[\]()!|]")


def description_token_count(description: str) -> int:
    cleaned = _FORMATTING_RE.sub(" ", description)
    return len(tokenize(normalize_text(cleaned)))


@dataclass(frozen=True)
class DescriptionStats:
    ecosystem: str
    count: int
    median: int | None
    p90: int | None
    p95: int | None
    max: int | None
    mean: float | None


def _nearest_rank(sorted_values: list, pct: float) -> int:
    # Nearest-rank percentile: smallest value with cumulative share >= pct.
    import math

    rank = max(1, math.ceil(pct / 100 * len(sorted_values)))
    return sorted_values[rank - 1]


def description_length_stats(store, ecosystem: str) -> DescriptionStats:
    """Token-length order statistics over non-empty tool descriptions."""
    lengths = []
    for record in store.ecosystem(ecosystem):
        for desc in record.tool_descriptions:
            n = description_token_count(desc)
            if n:
                lengths.append(n)
    if not lengths:
        return DescriptionStats(ecosystem, 0, None, None, None, None, None)
    lengths.sort()
    return DescriptionStats(
        ecosystem=ecosystem,
        count=len(lengths),
        median=_nearest_rank(lengths, 50),
        p90=_nearest_rank(lengths, 90),
        p95=_nearest_rank(lengths, 95),
        max=lengths[-1],
        mean=sum(lengths) / len(lengths),
    )


@dataclass(frozen=True)
class DeveloperShareRow:
    ecosystem: str
    top_k: int
    tools: int
    tool_share: float
    repos: int
    repo_share: float


def developer_concentration(store, ecosystem: str, tool_counts: dict | None = None, ks: tuple = (1, 5, 10, 20)) -> list:
    """Cumulative tool and repository shares of the top-k developers.

    ``tool_counts`` maps repo_id -> tool count; by default the length of
    the manifest's description list stands in for extracted tool counts.
    """
    records = store.ecosystem(ecosystem)
    if tool_counts is None:
        tool_counts = {r.repo_id: len(r.tool_descriptions) for r in records}
    per_dev: dict = {}
    for rec in records:
        tools, repos = per_dev.get(rec.developer_key, (0, 0))
        per_dev[rec.developer_key] = (tools + tool_counts.get(rec.repo_id, 0), repos + 1)
    ranked = sorted(per_dev.items(), key=lambda kv: (-kv[1][0], kv[0]))
    total_tools = sum(t for t, _ in per_dev.values())
    total_repos = sum(r for _, r in per_dev.values())
    rows = []
    for k in ks:
        top = ranked[:k]
        tools = sum(t for _, (t, _) in top)
        repos = sum(r for _, (_, r) in top)
        rows.append(
            DeveloperShareRow(
                ecosystem=ecosystem,
                top_k=k,
                tools=tools,
                tool_share=tools / total_tools if total_tools else 0.0,
                repos=repos,
                repo_share=repos / total_repos if total_repos else 0.0,
            )
        )
    return rows
