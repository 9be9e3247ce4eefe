import json

import pytest

from cloneaudit.cli import main
from cloneaudit.rundir import RunDir

from synth import make_manifest_corpus


@pytest.fixture(scope="module")
def corpus_manifest(tmp_path_factory):
    base = tmp_path_factory.mktemp("clirun")
    manifest, clones = make_manifest_corpus(
        base / "repos", n_repos=10, n_clones=3, ecosystems=("MCP", "Skills"), seed=11
    )
    return base, manifest, clones


@pytest.fixture(scope="module")
def full_run(corpus_manifest, capfd_factory=None):
    base, manifest, _ = corpus_manifest
    out = base / "run"
    rc = main(["all", "--manifest", str(manifest), "--out", str(out), "--seed", "3"])
    assert rc == 0
    return RunDir(out)


class TestAllPipeline:
    def test_exit_zero_and_artifacts(self, full_run):
        run = full_run
        assert (run.corpus / "records.ndjson").exists()
        assert (run.scores / "summary.json").exists()
        assert (run.analysis / "analysis.json").exists()
        assert (run.analysis / "metadata.json").exists()
        assert run.plan_path.exists()
        assert run.config_path.exists()

    def test_report_files(self, full_run):
        report = full_run.report
        assert (report / "report.md").exists()
        assert (report / "prevalence.csv").exists()
        assert (report / "calibration.csv").exists()
        assert list(report.glob("hist_*.csv")), "expected histogram CSVs"
        pngs = list(report.glob("*.png"))
        assert pngs, "expected rendered figures"
        for png in pngs:
            assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_config_persisted(self, full_run):
        config = json.loads(full_run.config_path.read_text())
        assert config["seed"] == 3
        assert config["threshold"] == 80.0
        assert config["exclude_same_developer"] is True

    def test_score_summary_counts(self, full_run):
        summary = json.loads((full_run.scores / "summary.json").read_text())
        assert summary["qualifying_repos"] >= 2
        assert set(summary["groups"]) == {"mcp-mcp", "skills-skills", "mcp-skills"}


class TestStageOrdering:
    def test_score_before_normalize_fails(self, corpus_manifest, tmp_path, capsys):
        base, manifest, _ = corpus_manifest
        out = tmp_path / "partial"
        assert main(["ingest", "--manifest", str(manifest), "--out", str(out)]) == 0
        rc = main(["score", "--out", str(out)])
        assert rc == 1
        assert "normalize" in capsys.readouterr().err

    def test_analyze_before_score_fails(self, tmp_path, capsys):
        rc = main(["analyze", "--out", str(tmp_path / "empty")])
        assert rc == 1
        assert "score" in capsys.readouterr().err

    def test_missing_manifest(self, tmp_path, capsys):
        rc = main(["ingest", "--manifest", str(tmp_path / "nope.ndjson"), "--out", str(tmp_path / "r")])
        assert rc == 1
        assert "error:" in capsys.readouterr().err


class TestLabelSubcommand:
    def test_label_roundtrip(self, full_run):
        plan = json.loads(full_run.plan_path.read_text())
        stratum = next(s for s in plan["strata"] if s["sampled_pairs"])
        a, b = stratum["sampled_pairs"][0]
        rc = main(
            [
                "label", "--out", str(full_run.root),
                "--pair", f"{a}~{b}",
                "--metric", stratum["metric"],
                "--group", stratum["group"],
                "--bucket", str(stratum["bucket_lo"]),
                "--label", "clone",
                "--annotator", "r1",
                "--note", "structure matches",
            ]
        )
        assert rc == 0
        rows = [
            json.loads(line)
            for line in full_run.labels_path.read_text().splitlines()
            if line.strip()
        ]
        assert rows[-1]["pair_a"] == a and rows[-1]["label"] == "clone"

    def test_label_outside_plan_fails(self, full_run, capsys):
        rc = main(
            [
                "label", "--out", str(full_run.root),
                "--pair", "zzzz~yyyy",
                "--metric", "jaccard",
                "--group", "mcp-mcp",
                "--bucket", "80.0",
                "--label", "clone",
                "--annotator", "r1",
            ]
        )
        assert rc == 1
        assert "not in the sample plan" in capsys.readouterr().err
