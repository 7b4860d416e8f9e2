"""Tabular (TSV) and figure output for the reporting commands."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .iohelpers import atomic_write_text
from .scoring import AggregateReport, EvalReport


def write_tsv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    lines = ["\t".join(header)]
    lines.extend("\t".join(str(cell) for cell in row) for row in rows)
    atomic_write_text(path, "\n".join(lines) + "\n")


def type_count_rows(per_type_counts: dict[str, int]) -> list[list]:
    return [[label, per_type_counts[label]] for label in sorted(per_type_counts)]


def save_type_count_figure(per_type_counts: dict[str, int], path: Path) -> None:
    labels = sorted(per_type_counts)
    values = [per_type_counts[lab] for lab in labels]
    fig, ax = plt.subplots(figsize=(max(4, 0.9 * len(labels) + 2), 3.5))
    ax.bar(labels, values, color="#4878cf")
    ax.set_ylabel("entities")
    ax.set_title("entity counts per type")
    ax.tick_params(axis="x", rotation=45)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_score_figure(
    reports: Sequence[EvalReport], aggregate: AggregateReport, path: Path
) -> None:
    """Per-run F1 bars plus the per-type breakdown of the first run."""
    fig, (ax_runs, ax_types) = plt.subplots(1, 2, figsize=(9, 3.5))

    run_labels = [f"run {i}" for i in range(len(reports))]
    ax_runs.bar(run_labels, [r.f1 * 100 for r in reports], color="#4878cf")
    ax_runs.axhline(aggregate.mean_f1 * 100, color="#d65f5f", linestyle="--",
                    label=f"mean {aggregate.mean_f1 * 100:.2f}")
    ax_runs.set_ylabel("micro F1 (%)")
    ax_runs.set_ylim(0, 105)
    ax_runs.legend(fontsize=8)

    per_type = reports[0].per_type
    labels = sorted(per_type)
    ax_types.bar(labels, [per_type[lab].f1 * 100 for lab in labels], color="#6acc65")
    ax_types.set_ylabel("per-type F1, run 0 (%)")
    ax_types.set_ylim(0, 105)
    ax_types.tick_params(axis="x", rotation=45)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def score_table(report: EvalReport) -> str:
    """Plain-text micro + per-type table, percentages at 2 decimals."""
    lines = [f"{'':<16}{'P':>8}{'R':>8}{'F1':>8}{'tp':>6}{'fp':>6}{'fn':>6}"]
    lines.append(
        f"{'micro':<16}{report.precision * 100:>8.2f}{report.recall * 100:>8.2f}"
        f"{report.f1 * 100:>8.2f}{report.tp:>6}{report.fp:>6}{report.fn:>6}"
    )
    for label in sorted(report.per_type):
        s = report.per_type[label]
        lines.append(
            f"{label:<16}{s.precision * 100:>8.2f}{s.recall * 100:>8.2f}"
            f"{s.f1 * 100:>8.2f}{s.tp:>6}{s.fp:>6}{s.fn:>6}"
        )
    return "\n".join(lines)
