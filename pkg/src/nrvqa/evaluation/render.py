# Copyright 2025 - Pruna AI GmbH. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from __future__ import annotations

from enum import Enum
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from nrvqa.errors import IoError, UsageError  # noqa: E402
from nrvqa.evaluation.report import REPORT_COLUMNS, EvaluationReport, SummaryRow  # noqa: E402
from nrvqa.logging.logger import nrvqa_logger  # noqa: E402

DECIMALS = 6
SVG_RC = {"svg.hashsalt": "nrvqa", "svg.fonttype": "path", "figure.dpi": 100}
FRACTION_EXPERIMENTS = ("sweep", "time")


class ReportFormat(str, Enum):
    """Output formats of a report."""

    CSV = "csv"
    MARKDOWN = "markdown"
    SVG = "svg"


def _number(value: float | None) -> str:
    return "undefined" if value is None else f"{value:.{DECIMALS}f}"


def _mean_std(mean: float | None, std: float | None) -> str:
    if mean is None or std is None:
        return "undefined"
    return f"{mean:.{DECIMALS}f} ± {std:.{DECIMALS}f}"


def split_label(block: str) -> str:
    """Train/test percentages of a fraction block, e.g. "0.8" becomes "80/20"."""
    train_percent = int(round(float(block) * 100))
    return f"{train_percent}/{100 - train_percent}"


def report_csv(rep: EvaluationReport) -> str:
    """
    Render the report rows as CSV text.

    Parameters
    ----------
    rep : EvaluationReport
        The report.

    Returns
    -------
    str
        CSV with the fixed report header.
    """
    frame = pd.DataFrame(rep.rows(), columns=list(REPORT_COLUMNS))
    return frame.to_csv(index=False, lineterminator="\n")


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines.extend("| " + " | ".join(row) + " |" for row in rows)
    return lines


def _unit_table(rep: EvaluationReport) -> list[str]:
    cells: dict[tuple[str, str], str] = {(unit.algo, unit.group): _number(unit.pcc) for unit in rep.units}
    rows = [[group] + [cells.get((algo, group), "") for algo in rep.algos] for group in rep.groups]
    for block in rep.blocks:
        summaries = [rep.summary(algo, block) for algo in rep.algos]
        rows.append([block.capitalize()] + [_mean_std(row.mean_pcc, row.std_pcc) for row in summaries])
    return _table(["group"] + rep.algos, rows)


def _block_table(rep: EvaluationReport, timing: bool) -> list[str]:
    rows = []
    for block in rep.blocks:
        summaries: list[SummaryRow] = [rep.summary(algo, block) for algo in rep.algos]
        if timing:
            rows.append([split_label(block)] + [_mean_std(row.mean_time, row.std_time) for row in summaries])
        else:
            rows.append([split_label(block)] + [_mean_std(row.mean_pcc, row.std_pcc) for row in summaries])
    return _table(["train/test"] + rep.algos, rows)


def report_markdown(rep: EvaluationReport) -> str:
    """
    Render the report as Markdown tables, numbers with six decimals.

    Parameters
    ----------
    rep : EvaluationReport
        The report.

    Returns
    -------
    str
        Markdown text.
    """
    lines = [f"# {rep.experiment} (seed {rep.seed})", ""]
    if rep.experiment in FRACTION_EXPERIMENTS:
        if rep.timed:
            lines += ["## Training time (s)", ""] + _block_table(rep, timing=True) + [""]
        lines += ["## Pearson correlation", ""] + _block_table(rep, timing=False)
    else:
        lines += ["## Pearson correlation", ""] + _unit_table(rep)
    flagged = rep.flagged()
    if flagged:
        lines += ["", "Undefined correlations: " + ", ".join(f"{unit.algo}/{unit.group}" for unit in flagged)]
    return "\n".join(lines) + "\n"


def _save_svg(fig: plt.Figure, path: Path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _scatter(rep: EvaluationReport, path: Path) -> None:
    columns = min(3, len(rep.algos))
    rows = int(np.ceil(len(rep.algos) / columns))
    fig, axes = plt.subplots(rows, columns, figsize=(3.2 * columns, 3.2 * rows), squeeze=False)
    for ax in axes.ravel()[len(rep.algos) :]:
        ax.set_axis_off()
    for ax, algo in zip(axes.ravel(), rep.algos):
        units = [unit for unit in rep.units_of(algo) if unit.block is not None]
        q = np.concatenate([unit.q for unit in units]) if units else np.zeros(0)
        q_hat = np.concatenate([unit.q_hat for unit in units]) if units else np.zeros(0)
        ax.scatter(q, q_hat, s=4, alpha=0.5)
        ax.plot([0.0, 1.0], [0.0, 1.0], color="black", linewidth=0.8)
        ax.set_xlim(0.0, 1.0)
        ax.set_ylim(0.0, 1.0)
        ax.set_title(algo)
        ax.set_xlabel("oracle q")
        ax.set_ylabel("predicted q")
    fig.tight_layout()
    _save_svg(fig, path)


def _pcc_vs_fraction(rep: EvaluationReport, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    fractions = [float(block) for block in rep.blocks]
    for algo in rep.algos:
        summaries = [rep.summary(algo, block) for block in rep.blocks]
        means = [np.nan if row.mean_pcc is None else row.mean_pcc for row in summaries]
        stds = [0.0 if row.std_pcc is None else row.std_pcc for row in summaries]
        ax.errorbar(fractions, means, yerr=stds, marker="o", capsize=3, label=algo)
    ax.set_xlabel("training fraction")
    ax.set_ylabel("PCC")
    ax.invert_xaxis()
    ax.legend(fontsize="small")
    fig.tight_layout()
    _save_svg(fig, path)


def _tradeoff(rep: EvaluationReport, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for algo in rep.algos:
        units = rep.units_of(algo)
        times = [unit.train_time_s for unit in units if unit.train_time_s is not None]
        pccs = [unit.pcc for unit in units if unit.pcc is not None]
        if not times or not pccs:
            continue
        ax.scatter([np.mean(times)], [np.mean(pccs)])
        ax.annotate(algo, (np.mean(times), np.mean(pccs)), textcoords="offset points", xytext=(4, 4))
    ax.set_xscale("log")
    ax.set_xlabel("mean training time (s)")
    ax.set_ylabel("mean PCC")
    fig.tight_layout()
    _save_svg(fig, path)


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        nrvqa_logger.error(f"Could not write report file {path}: {e}")
        raise IoError(f"Could not write report file {path}.") from e


def render_report(rep: EvaluationReport, report_format: str, out_dir: str | Path) -> list[Path]:
    """
    Write a report in one format.

    Parameters
    ----------
    rep : EvaluationReport
        The report.
    report_format : str
        "csv" (with a metadata JSON), "markdown" or "svg".
    out_dir : str | Path
        Output directory, created if needed.

    Returns
    -------
    list[Path]
        The written files.
    """
    try:
        fmt = ReportFormat(report_format)
    except ValueError as e:
        nrvqa_logger.error(f"Unknown report format '{report_format}', available: {[f.value for f in ReportFormat]}.")
        raise UsageError(f"Unknown report format '{report_format}'.") from e

    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise IoError(f"Could not create report directory {out_dir}.") from e
    stem = rep.experiment

    if fmt is ReportFormat.CSV:
        paths = [out_dir / f"{stem}.csv", out_dir / f"{stem}_metadata.json"]
        _write_text(paths[0], report_csv(rep))
        _write_text(paths[1], rep.metadata_json())
        return paths
    if fmt is ReportFormat.MARKDOWN:
        path = out_dir / f"{stem}.md"
        _write_text(path, report_markdown(rep))
        return [path]

    paths = []
    with plt.rc_context(SVG_RC):
        if rep.experiment != "baseline":
            paths.append(out_dir / f"{stem}_scatter.svg")
            _scatter(rep, paths[-1])
        if rep.experiment in FRACTION_EXPERIMENTS:
            paths.append(out_dir / f"{stem}_pcc_vs_fraction.svg")
            _pcc_vs_fraction(rep, paths[-1])
        if rep.timed:
            paths.append(out_dir / f"{stem}_tradeoff.svg")
            _tradeoff(rep, paths[-1])
    return paths
