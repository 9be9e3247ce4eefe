"""Run-directory layout shared by the CLI stages and the review API."""

from __future__ import annotations

from pathlib import Path


class RunDir:
    """One pipeline run owns one directory; each stage writes one subtree."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    @property
    def corpus(self) -> Path:
        return self.root / "corpus"

    @property
    def docs(self) -> Path:
        return self.root / "docs"

    @property
    def scores(self) -> Path:
        return self.root / "scores"

    @property
    def analysis(self) -> Path:
        return self.root / "analysis"

    @property
    def verify(self) -> Path:
        return self.root / "verify"

    @property
    def report(self) -> Path:
        return self.root / "report"

    @property
    def plan_path(self) -> Path:
        return self.verify / "plan.json"

    @property
    def labels_path(self) -> Path:
        return self.verify / "labels.ndjson"

    @property
    def config_path(self) -> Path:
        return self.root / "config.json"

    def require(self, path: Path, produced_by: str) -> Path:
        if not path.exists():
            raise FileNotFoundError(
                f"{path} is missing; run the '{produced_by}' subcommand first"
            )
        return path
