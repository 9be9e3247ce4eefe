"""Repository normalization.

Reduces a checked-out repository to a canonical byte stream and token set:
filter files, strip comments, collapse whitespace, lowercase, tokenize.
Everything downstream (both similarity metrics, the size filter) consumes
only the NormalizedDocument produced here.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

TOKEN_RE = re.compile(r"[a-z0-9_]+")
_WS_RE = re.compile(r"\s+")

DEFAULT_EXCLUDED_DIRS = frozenset(
    {
        ".git",
        ".hg",
        ".svn",
        "node_modules",
        "dist",
        "build",
        "target",
        "__pycache__",
        ".venv",
        "venv",
        ".tox",
        ".mypy_cache",
        "vendor",
        "coverage",
    }
)
DEFAULT_EXCLUDED_EXTENSIONS = frozenset(
    {
        ".png", ".jpg", ".jpeg", ".gif", ".bmp", ".ico", ".svg", ".webp",
        ".zip", ".tar", ".gz", ".tgz", ".bz2", ".xz", ".7z", ".rar",
        ".pdf", ".woff", ".woff2", ".ttf", ".eot", ".otf",
        ".so", ".dll", ".dylib", ".exe", ".bin", ".o", ".a",
        ".pyc", ".class", ".jar", ".wasm",
        ".mp3", ".mp4", ".wav", ".avi", ".mov",
        ".lock",
    }
)

# Comment families by extension; unknown extensions are passed through
# unstripped rather than risk mangling an unknown format.
_C_FAMILY = {
    ".c", ".h", ".cpp", ".cc", ".cxx", ".hpp", ".hh", ".java", ".js",
    ".jsx", ".ts", ".tsx", ".mjs", ".cjs", ".go", ".rs", ".cs", ".swift",
    ".kt", ".kts", ".scala", ".php", ".dart", ".css", ".scss", ".less",
    ".proto", ".sol",
}
_SCRIPT_FAMILY = {
    ".py", ".pyi", ".rb", ".sh", ".bash", ".zsh", ".pl", ".pm", ".r",
    ".jl", ".tcl", ".yaml", ".yml", ".toml", ".cfg", ".ini", ".mk",
    ".dockerfile", ".nim", ".ex", ".exs",
}
_MARKUP_FAMILY = {".html", ".htm", ".xml", ".xhtml", ".vue", ".svelte", ".md", ".markdown"}


def comment_family(path: str | Path) -> str:
    ext = Path(path).suffix.lower()
    if ext in _C_FAMILY:
        return "c"
    if ext in _SCRIPT_FAMILY:
        return "script"
    if ext in _MARKUP_FAMILY:
        return "markup"
    return "unknown"


@dataclass(frozen=True)
class FileFilterPolicy:
    """Which files contribute to a repository's normalized stream."""

    excluded_dirs: frozenset = DEFAULT_EXCLUDED_DIRS
    excluded_extensions: frozenset = DEFAULT_EXCLUDED_EXTENSIONS
    binary_detection: bool = True
    max_file_bytes: int = 2 * 1024 * 1024


@dataclass(frozen=True)
class NormalizedDocument:
    """A repository reduced to canonical bytes and tokens.

    ``token_count`` counts tokens in sequence order, before set collapse;
    the size filter operates on it.  ``token_set`` is what Jaccard sees and
    ``byte_stream`` is what the fuzzy hash sees.
    """

    repo_id: str
    byte_stream: bytes
    token_set: frozenset
    token_count: int
    file_count: int


def collect_source_files(repo_root: str | Path, policy: FileFilterPolicy | None = None) -> list[str]:
    """Relative paths of all includable files, sorted bytewise.

    The sort fixes concatenation order, which keeps the normalized stream
    (and therefore the fuzzy digest) independent of directory-walk order.
    """
    policy = policy or FileFilterPolicy()
    root = Path(repo_root)
    if not root.is_dir():
        raise IOError(f"not a readable directory: {root}")
    keep: list[str] = []
    stack = [root]
    while stack:
        d = stack.pop()
        try:
            entries = list(d.iterdir())
        except OSError:
            if d == root:
                raise IOError(f"unreadable directory: {d}")
            continue
        for entry in entries:
            if entry.is_symlink():
                continue
            if entry.is_dir():
                if entry.name not in policy.excluded_dirs:
                    stack.append(entry)
                continue
            if not entry.is_file():
                continue
            if entry.suffix.lower() in policy.excluded_extensions:
                continue
            try:
                size = entry.stat().st_size
            except OSError:
                continue
            if size > policy.max_file_bytes:
                continue
            if policy.binary_detection and size:
                try:
                    with open(entry, "rb") as fh:
                        if b"\x00" in fh.read(8192):
                            continue
                except OSError:
                    continue
            keep.append(entry.relative_to(root).as_posix())
    keep.sort(key=lambda p: p.encode())
    return keep


def _strip_delimited(
    content: str,
    line_markers: list[str],
    block_pairs: list[tuple[str, str]],
    handle_strings: bool = True,
) -> str:
    """Remove comment spans while leaving string-literal contents intact."""
    out: list[str] = []
    i = 0
    n = len(content)
    while i < n:
        ch = content[i]
        if handle_strings and ch in "\"'":
            # String literal (single, double, or triple quoted): copy verbatim.
            quote = ch
            if content[i : i + 3] == quote * 3:
                quote = quote * 3
            out.append(content[i : i + len(quote)])
            i += len(quote)
            while i < n:
                if content[i] == "\\" and len(quote) == 1:
                    out.append(content[i : i + 2])
                    i += 2
                    continue
                if content[i : i + len(quote)] == quote:
                    out.append(quote)
                    i += len(quote)
                    break
                out.append(content[i])
                i += 1
            continue
        matched = False
        for start, end in block_pairs:
            if content.startswith(start, i):
                stop = content.find(end, i + len(start))
                i = n if stop < 0 else stop + len(end)
                matched = True
                break
        if matched:
            continue
        for marker in line_markers:
            if content.startswith(marker, i):
                stop = content.find("\n", i)
                i = n if stop < 0 else stop
                matched = True
                break
        if matched:
            continue
        out.append(ch)
        i += 1
    return "".join(out)


def strip_comments(content: str, language_family: str) -> str:
    """Remove comments for the given family; unknown families pass through."""
    if language_family == "c":
        return _strip_delimited(content, ["//"], [("/*", "*/")])
    if language_family == "script":
        return _strip_delimited(content, ["#"], [])
    if language_family == "markup":
        # Markup quotes delimit prose and attribute values, not literals;
        # treating them as strings would hide comments behind apostrophes.
        return _strip_delimited(content, [], [("<!--", "-->")], handle_strings=False)
    return content


def normalize_text(content: str) -> str:
    """Collapse whitespace runs to single spaces, trim, lowercase."""
    return _WS_RE.sub(" ", content).strip().lower()


def tokenize(content: str) -> list[str]:
    """Maximal runs of [a-z0-9_] over already-normalized text, in order."""
    return TOKEN_RE.findall(content)


def build_document(repo_id: str, repo_root: str | Path, policy: FileFilterPolicy | None = None) -> NormalizedDocument:
    """Normalize one repository into a NormalizedDocument."""
    policy = policy or FileFilterPolicy()
    root = Path(repo_root)
    paths = collect_source_files(root, policy)
    pieces: list[str] = []
    file_count = 0
    for rel in paths:
        try:
            raw = (root / rel).read_bytes()
        except OSError:
            continue
        text = raw.decode("utf-8", errors="replace")
        pieces.append(strip_comments(text, comment_family(rel)))
        file_count += 1
    normalized = normalize_text("\n".join(pieces))
    tokens = tokenize(normalized)
    return NormalizedDocument(
        repo_id=repo_id,
        byte_stream=normalized.encode("utf-8"),
        token_set=frozenset(tokens),
        token_count=len(tokens),
        file_count=file_count,
    )


def passes_size_filter(doc: NormalizedDocument, min_tokens: int = 50) -> bool:
    """Repositories under the token floor are too small to score meaningfully."""
    return doc.token_count >= min_tokens


def save_document(doc: NormalizedDocument, docs_dir: str | Path) -> None:
    docs_dir = Path(docs_dir)
    docs_dir.mkdir(parents=True, exist_ok=True)
    (docs_dir / f"{doc.repo_id}.norm").write_bytes(doc.byte_stream)
    digest = hashlib.sha256("\n".join(sorted(doc.token_set)).encode()).hexdigest()
    meta = {
        "repo_id": doc.repo_id,
        "token_count": doc.token_count,
        "file_count": doc.file_count,
        "token_set_digest": digest,
    }
    (docs_dir / f"{doc.repo_id}.meta.json").write_text(json.dumps(meta, sort_keys=True) + "\n")


def load_document(repo_id: str, docs_dir: str | Path) -> NormalizedDocument:
    docs_dir = Path(docs_dir)
    byte_stream = (docs_dir / f"{repo_id}.norm").read_bytes()
    meta = json.loads((docs_dir / f"{repo_id}.meta.json").read_text())
    text = byte_stream.decode("utf-8")
    tokens = tokenize(text)
    return NormalizedDocument(
        repo_id=repo_id,
        byte_stream=byte_stream,
        token_set=frozenset(tokens),
        token_count=meta["token_count"],
        file_count=meta["file_count"],
    )
