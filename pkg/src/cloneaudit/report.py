"""Report rendering.

Writes the delimited outputs (CSV), Markdown tables, score-distribution
figures, and the run-metadata block that makes a run reproducible.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .pairwise import histogram_rows  # noqa: E402


def write_histogram_csv(counts: list, bin_width: float, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_lo", "bin_hi", "count"])
        for row in histogram_rows(counts, bin_width):
            writer.writerow([row["bin_lo"], row["bin_hi"], row["count"]])


def render_histogram_figure(counts: list, bin_width: float, title: str, path: str | Path) -> None:
    """Log-scale score distribution, one bar per bin."""
    edges = [i * bin_width for i in range(len(counts) + 1)]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar(edges[:-1], counts, width=bin_width, align="edge", color="#4878a8", edgecolor="none")
    ax.set_xlabel("similarity score")
    ax.set_ylabel("pair count")
    ax.set_title(title)
    ax.set_xlim(0, 100)
    if any(counts):
        ax.set_yscale("symlog")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_prevalence_csv(reports: list, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["metric", "group", "threshold", "candidate_pairs", "repos_involved", "largest_cluster"]
        )
        for r in reports:
            writer.writerow(
                [r.metric, r.group, r.threshold, r.candidate_pairs, r.repos_involved, r.largest_cluster]
            )


def prevalence_markdown(reports: list) -> str:
    lines = [
        "| Metric | Group | Threshold | Candidate pairs | Repos involved | Largest cluster |",
        "|---|---|---|---|---|---|",
    ]
    for r in reports:
        lines.append(
            f"| {r.metric} | {r.group} | >= {r.threshold:g} | {r.candidate_pairs} "
            f"| {r.repos_involved} | {r.largest_cluster} |"
        )
    return "\n".join(lines) + "\n"


def _round2(x: float) -> str:
    # Half-up to 2 decimals for display; CSV keeps full precision.
    from decimal import Decimal, ROUND_HALF_UP

    return str(Decimal(str(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def write_calibration_csv(rows: list, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["metric", "group", "bucket_lo", "bucket_hi", "total", "sampled",
             "clones", "proportion", "ci_lo", "ci_hi"]
        )
        for r in rows:
            writer.writerow(
                [r.metric, r.group, r.bucket.lo, r.bucket.hi, r.total_pairs,
                 r.sampled, r.clones,
                 "" if r.proportion is None else repr(r.proportion),
                 "" if r.ci_lo is None else repr(r.ci_lo),
                 "" if r.ci_hi is None else repr(r.ci_hi)]
            )


def calibration_markdown(rows: list) -> str:
    lines = [
        "| Metric | Bucket | Total pairs | Clone/Samp. | Proportion (95% CI) |",
        "|---|---|---|---|---|",
    ]
    for r in rows:
        if r.sampled:
            stat = f"{_round2(r.proportion)} ({_round2(r.ci_lo)}--{_round2(r.ci_hi)})"
        else:
            stat = "-"
        lines.append(
            f"| {r.metric} | {r.bucket.label} | {r.total_pairs} | {r.clones}/{r.sampled} | {stat} |"
        )
    return "\n".join(lines) + "\n"


def write_run_metadata(config: dict, path: str | Path) -> None:
    import hashlib

    payload = dict(config)
    payload["config_hash"] = hashlib.sha256(
        json.dumps(config, sort_keys=True).encode()
    ).hexdigest()[:16]
    payload.setdefault(
        "assumptions",
        [
            "developer identities are taken verbatim from the manifest",
            "the fuzzy hash is computed over the normalized byte stream, "
            "not raw repository bytes",
            "candidate clusters are computed per metric and never merged "
            "across metrics",
        ],
    )
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n")


def emit_report(
    out_dir: str | Path,
    histograms: dict,
    prevalence: list,
    calibration: dict,
    config: dict,
    bin_width: float = 1.0,
) -> None:
    """Write every report artifact under ``out_dir``.

    ``histograms`` maps (group, metric) -> bin counts; ``calibration`` maps
    (group, metric) -> CalibrationRow lists.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    md = ["# Clone audit report", ""]
    for (group, metric), counts in sorted(histograms.items()):
        stem = f"hist_{group}_{metric}"
        write_histogram_csv(counts, bin_width, out / f"{stem}.csv")
        render_histogram_figure(
            counts, bin_width, f"{group} {metric} score distribution", out / f"{stem}.png"
        )
    md += ["## Candidate prevalence", "", prevalence_markdown(prevalence)]
    write_prevalence_csv(prevalence, out / "prevalence.csv")
    all_rows = []
    for (group, metric), rows in sorted(calibration.items()):
        md += [f"## Calibration: {group} / {metric}", "", calibration_markdown(rows)]
        all_rows.extend(rows)
    write_calibration_csv(all_rows, out / "calibration.csv")
    write_run_metadata(config, out / "run_metadata.json")
    (out / "report.md").write_text("\n".join(md))
