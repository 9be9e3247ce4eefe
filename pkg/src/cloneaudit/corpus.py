"""Corpus ingestion.

Reads a newline-delimited JSON manifest of repositories, merges rows that
point at the same canonical URL, drops rows whose checkout is missing, and
tags each surviving record with its ecosystem, developer, and primary
language.  The resulting store is immutable and is the unit every later
stage operates on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from pathlib import Path

ECOSYSTEMS = ("MCP", "Skills")

# Extension -> language label, for byte-count language detection.
EXTENSION_LANGUAGES = {
    ".py": "Python", ".pyi": "Python",
    ".ts": "TypeScript", ".tsx": "TypeScript",
    ".js": "JavaScript", ".jsx": "JavaScript", ".mjs": "JavaScript", ".cjs": "JavaScript",
    ".go": "Go",
    ".java": "Java",
    ".rs": "Rust",
    ".c": "C", ".h": "C",
    ".cpp": "C++", ".cc": "C++", ".cxx": "C++", ".hpp": "C++",
    ".cs": "C#",
    ".rb": "Ruby",
    ".php": "PHP",
    ".swift": "Swift",
    ".kt": "Kotlin", ".kts": "Kotlin",
    ".scala": "Scala",
    ".sh": "Shell", ".bash": "Shell", ".zsh": "Shell",
    ".pl": "Perl",
    ".r": "R",
    ".jl": "Julia",
    ".lua": "Lua",
    ".dart": "Dart",
    ".ex": "Elixir", ".exs": "Elixir",
    ".html": "HTML", ".htm": "HTML",
    ".css": "CSS", ".scss": "CSS", ".less": "CSS",
    ".json": "JSON",
    ".yaml": "YAML", ".yml": "YAML",
    ".md": "Markdown", ".markdown": "Markdown",
}

# Markup/config languages never win the primary-language argmax.
MARKUP_LANGUAGES = frozenset({"HTML", "CSS", "JSON", "YAML", "Markdown"})


class ManifestError(ValueError):
    """Fatal manifest problem: unparseable row or an empty surviving corpus."""


@dataclass
class RepoRecord:
    """One repository: the unit of analysis."""

    repo_id: str
    ecosystem: str
    developer_key: str
    source_url: str
    display_name: str
    local_path: str
    languages: dict = field(default_factory=dict)
    primary_language: str = "unknown"
    tool_descriptions: list = field(default_factory=list)


@dataclass
class CorpusStore:
    """Immutable ingest result plus its bookkeeping counts."""

    records: list
    ingested: int
    merged: int
    dropped: int

    def by_id(self) -> dict:
        return {r.repo_id: r for r in self.records}

    def ecosystem(self, eco: str) -> list:
        return [r for r in self.records if r.ecosystem == eco]


def canonicalize_url(url: str) -> str:
    """Lowercased host, no scheme, no trailing slash or .git suffix."""
    u = url.strip()
    for scheme in ("https://", "http://", "git://", "ssh://"):
        if u.lower().startswith(scheme):
            u = u[len(scheme):]
            break
    u = u.rstrip("/")
    if u.lower().endswith(".git"):
        u = u[:-4]
    u = u.rstrip("/")
    host, _, rest = u.partition("/")
    return host.lower() + ("/" + rest if rest else "")


def normalize_developer(developer: str) -> str:
    return developer.strip().casefold()


def detect_languages(repo_root: str | Path) -> dict:
    """Per-language byte counts over mappable files in the tree."""
    root = Path(repo_root)
    if not root.is_dir():
        raise IOError(f"not a readable directory: {root}")
    counts: dict = {}
    for path in root.rglob("*"):
        if path.is_symlink() or not path.is_file():
            continue
        lang = EXTENSION_LANGUAGES.get(path.suffix.lower())
        if lang is None:
            continue
        try:
            size = path.stat().st_size
        except OSError:
            continue
        counts[lang] = counts.get(lang, 0) + size
    return counts


def primary_language(languages: dict) -> str:
    """Max-byte language, markup excluded; lexicographic tie-break."""
    candidates = {k: v for k, v in languages.items() if k not in MARKUP_LANGUAGES}
    if not candidates:
        return "unknown"
    return min(candidates, key=lambda k: (-candidates[k], k))


def _repo_id_for(canonical_url: str) -> str:
    import hashlib

    return hashlib.sha1(canonical_url.encode()).hexdigest()[:16]


def ingest_manifest(manifest_path: str | Path) -> CorpusStore:
    """Parse a manifest and build the deduplicated corpus store.

    Rows sharing a canonical URL are merged: the first non-empty value wins
    per scalar field and description lists are concatenated and
    deduplicated.  Rows whose local checkout is missing are dropped and
    counted.
    """
    path = Path(manifest_path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc

    by_url: dict = {}
    order: list = []
    merged = 0
    dropped = 0
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ManifestError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        for required in ("ecosystem", "url", "path"):
            if not row.get(required):
                raise ManifestError(f"{path}:{lineno}: missing field {required!r}")
        if row["ecosystem"] not in ECOSYSTEMS:
            raise ManifestError(
                f"{path}:{lineno}: ecosystem must be one of {ECOSYSTEMS}, got {row['ecosystem']!r}"
            )
        key = canonicalize_url(row["url"])
        if key in by_url:
            merged += 1
            _merge_row(by_url[key], row)
        else:
            by_url[key] = {
                "ecosystem": row["ecosystem"],
                "url": key,
                "developer": row.get("developer", ""),
                "name": row.get("name", ""),
                "path": row["path"],
                "descriptions": list(dict.fromkeys(row.get("descriptions") or [])),
            }
            order.append(key)

    records = []
    for key in order:
        row = by_url[key]
        local = Path(row["path"])
        if not local.is_dir():
            dropped += 1
            continue
        languages = detect_languages(local)
        records.append(
            RepoRecord(
                repo_id=_repo_id_for(key),
                ecosystem=row["ecosystem"],
                developer_key=normalize_developer(row["developer"] or "unknown"),
                source_url=key,
                display_name=row["name"] or key.rsplit("/", 1)[-1],
                local_path=str(local),
                languages=languages,
                primary_language=primary_language(languages),
                tool_descriptions=row["descriptions"],
            )
        )
    if not records:
        raise ManifestError(f"{path}: no repositories survived ingestion")
    return CorpusStore(records=records, ingested=len(records), merged=merged, dropped=dropped)


def _merge_row(existing: dict, row: dict) -> None:
    for src, dst in (("developer", "developer"), ("name", "name")):
        if not existing[dst] and row.get(src):
            existing[dst] = row[src]
    seen = set(existing["descriptions"])
    for desc in row.get("descriptions") or []:
        if desc not in seen:
            existing["descriptions"].append(desc)
            seen.add(desc)


def save_corpus(store: CorpusStore, corpus_dir: str | Path) -> None:
    corpus_dir = Path(corpus_dir)
    corpus_dir.mkdir(parents=True, exist_ok=True)
    with open(corpus_dir / "records.ndjson", "w") as fh:
        for rec in store.records:
            fh.write(json.dumps(asdict(rec), sort_keys=True) + "\n")
    summary = {"ingested": store.ingested, "merged": store.merged, "dropped": store.dropped}
    (corpus_dir / "summary.json").write_text(json.dumps(summary, sort_keys=True) + "\n")


def load_corpus(corpus_dir: str | Path) -> CorpusStore:
    corpus_dir = Path(corpus_dir)
    records = []
    with open(corpus_dir / "records.ndjson") as fh:
        for line in fh:
            if line.strip():
                records.append(RepoRecord(**json.loads(line)))
    summary = json.loads((corpus_dir / "summary.json").read_text())
    return CorpusStore(records=records, **summary)
