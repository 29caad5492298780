"""Delimited trial output and summary figures for verify runs."""

from __future__ import annotations

import csv
from dataclasses import fields
from pathlib import Path
from typing import List, Sequence, Tuple, Union

from .verify import TrialReport

__all__ = ["write_trials_csv", "write_margin_figure", "write_report"]

PathLike = Union[str, Path]


def write_trials_csv(reports: Sequence[TrialReport], path: PathLike) -> Path:
    path = Path(path)
    names = [f.name for f in fields(TrialReport)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for rep in reports:
            writer.writerow([getattr(rep, name) for name in names])
    return path


def write_margin_figure(
    reports: Sequence[TrialReport], path: PathLike, title: str
) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    margins = [r.margin for r in reports]
    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
    left.hist(margins, bins=40, color="#1565c0")
    left.axvline(0.0, color="#c62828", linewidth=1.2)
    left.set_xlabel("margin = bound - lambda*")
    left.set_ylabel("trials")
    left.set_title("margin distribution")
    right.scatter(
        [r.n for r in reports],
        [r.lambda_star for r in reports],
        s=9,
        alpha=0.45,
        color="#2e7d32",
    )
    right.axhline(reports[0].bound, color="#c62828", linewidth=1.2)
    right.set_xlabel("n")
    right.set_ylabel("lambda*")
    right.set_title("lambda* by instance size")
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def write_report(
    reports: Sequence[TrialReport], outdir: PathLike, prefix: str
) -> Tuple[Path, Path]:
    """Write ``<prefix>_trials.csv`` and ``<prefix>_margins.png`` to ``outdir``."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = write_trials_csv(reports, outdir / f"{prefix}_trials.csv")
    fig_path = write_margin_figure(
        reports, outdir / f"{prefix}_margins.png", f"{prefix} suite ({len(reports)} trials)"
    )
    return csv_path, fig_path
