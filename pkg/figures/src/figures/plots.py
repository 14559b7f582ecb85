"""Image builders over the estimator CLI's documented CSV/JSON formats.

All makers share three rules: inputs are read through their documented
column names (anything else raises SchemaError with the expected and
found names), no statistic is ever recomputed, and rendering is pure --
the same input bytes produce the same output bytes. Figures are drawn
straight onto an Agg canvas so no global pyplot state is involved.
"""

import csv
import hashlib
import json
import os
from pathlib import Path

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure
from matplotlib.patches import Patch

ADAPTIVE_COLOR = "#4878d0"
ORACLE_COLOR = "#ee854a"
DPI = 120

BOXPLOT_COLUMNS = ("x0", "replication", "p_hat", "p_hat_oracle", "error")
CURVE_COLUMNS = ("gamma", "risk")


class SchemaError(ValueError):
    """Input file does not match the documented CSV/JSON contract."""


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _read_rows(path, required) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        found = reader.fieldnames
        if found is None:
            raise SchemaError(f"{path}: empty file, expected columns "
                              f"{', '.join(required)}")
        missing = [c for c in required if c not in found]
        if missing:
            raise SchemaError(
                f"{path}: missing columns {', '.join(missing)}; "
                f"found {', '.join(found)}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def _float_cell(row, column, path, line) -> float:
    try:
        return float(row[column])
    except (TypeError, ValueError) as exc:
        raise SchemaError(
            f"{path}: row {line}: column {column!r} is not a number "
            f"({row[column]!r})") from exc


def _new_axes(width=8.0, height=4.5):
    fig = Figure(figsize=(width, height), dpi=DPI)
    FigureCanvasAgg(fig)
    return fig, fig.add_subplot()


def make_boxplots(results_csv, out_dir, *, stem="boxplot") -> dict:
    """One image per evaluation point: two boxes (adaptive, oracle) per cell.

    Cells are (design, sigma) pairs when those columns are present (the
    per-figure exports), otherwise the scenario id (plain simulate
    output). Rows whose error field is set are skipped.
    """
    rows = _read_rows(results_csv, BOXPLOT_COLUMNS)
    grouped = {}
    for line, row in enumerate(rows, start=2):
        if row.get("error"):
            continue
        x0 = _float_cell(row, "x0", results_csv, line)
        if "design" in row and "sigma" in row:
            label = f"{row['design']}\nsigma={float(row['sigma']):g}"
        else:
            label = row.get("scenario", "all")
        bucket = grouped.setdefault(f"{x0:g}", {}).setdefault(
            label, {"adaptive": [], "oracle": []})
        bucket["adaptive"].append(_float_cell(row, "p_hat", results_csv, line))
        bucket["oracle"].append(
            _float_cell(row, "p_hat_oracle", results_csv, line))
    if not grouped:
        raise SchemaError(f"{results_csv}: every row carries an error flag, "
                          "nothing to plot")

    os.makedirs(out_dir, exist_ok=True)
    report = {"outputs": [], "images": {},
              "inputs": {str(results_csv): _sha256(results_csv)}}
    for x0_key, cells in grouped.items():
        fig, ax = _new_axes(width=max(6.0, 1.6 * len(cells) + 2.0))
        labels = list(cells)
        adaptive = ax.boxplot(
            [cells[c]["adaptive"] for c in labels],
            positions=[2.0 * i + 0.8 for i in range(len(labels))],
            widths=0.34, patch_artist=True)
        oracle = ax.boxplot(
            [cells[c]["oracle"] for c in labels],
            positions=[2.0 * i + 1.2 for i in range(len(labels))],
            widths=0.34, patch_artist=True)
        for box in adaptive["boxes"]:
            box.set_facecolor(ADAPTIVE_COLOR)
        for box in oracle["boxes"]:
            box.set_facecolor(ORACLE_COLOR)
        ax.set_xticks([2.0 * i + 1.0 for i in range(len(labels))])
        ax.set_xticklabels(labels, fontsize=8)
        ax.set_ylabel("estimate of p(x0)")
        ax.set_title(f"adaptive vs oracle at x0 = {x0_key}")
        ax.legend(handles=[Patch(facecolor=ADAPTIVE_COLOR, label="adaptive"),
                           Patch(facecolor=ORACLE_COLOR, label="oracle")],
                  loc="best", fontsize=8)
        out_path = os.path.join(out_dir, f"{stem}-x0-{x0_key}.png")
        fig.savefig(out_path)
        report["outputs"].append(out_path)
        report["images"][os.path.basename(out_path)] = {
            "x0": float(x0_key),
            "cells": len(labels),
            "boxes": len(adaptive["boxes"]) + len(oracle["boxes"]),
            "rows": sum(len(cells[c]["adaptive"]) for c in labels),
        }
    return report


def make_gamma_curve(curve_csv, out_image, summary_json=None) -> dict:
    """Risk against the selection constant; one marker per grid point.

    The jump annotation is a passthrough: it appears exactly when the
    summary JSON written next to the curve flags jump_detected, and the
    printed factor is the summary's jump_statistic, not a recomputation.
    """
    rows = _read_rows(curve_csv, CURVE_COLUMNS)
    gammas = [_float_cell(r, "gamma", curve_csv, i)
              for i, r in enumerate(rows, start=2)]
    risks = [_float_cell(r, "risk", curve_csv, i)
             for i, r in enumerate(rows, start=2)]
    if any(b <= a for a, b in zip(gammas, gammas[1:])):
        raise SchemaError(f"{curve_csv}: gamma axis must be strictly "
                          "increasing")

    report = {"outputs": [str(out_image)], "markers": len(gammas),
              "jump_annotated": False,
              "inputs": {str(curve_csv): _sha256(curve_csv)}}
    fig, ax = _new_axes()
    line, = ax.plot(gammas, risks, marker="o", markersize=4,
                    color=ADAPTIVE_COLOR)
    report["markers"] = int(line.get_xdata().size)
    ax.set_xlabel("gamma")
    ax.set_ylabel("pointwise risk")
    ax.set_title("risk across the selection constant")

    if summary_json is not None:
        summary = json.loads(Path(summary_json).read_text())
        report["inputs"][str(summary_json)] = _sha256(summary_json)
        if summary.get("jump_detected"):
            # the flag and factor come from the summary; only the marker
            # placement is derived from the already-plotted curve
            ratios = [max(b, a) / min(b, a) if min(b, a) > 0 else float("inf")
                      for a, b in zip(risks, risks[1:])]
            at = max(range(len(ratios)), key=ratios.__getitem__)
            x_jump = 0.5 * (gammas[at] + gammas[at + 1])
            ax.axvline(x_jump, color=ORACLE_COLOR, linestyle="--",
                       linewidth=1.0)
            ax.annotate(f"jump x{summary['jump_statistic']:.2f}",
                        xy=(x_jump, max(risks)),
                        xytext=(4, -4), textcoords="offset points",
                        fontsize=8, color=ORACLE_COLOR)
            report["jump_annotated"] = True

    os.makedirs(os.path.dirname(os.path.abspath(out_image)), exist_ok=True)
    fig.savefig(out_image)
    return report


def make_function_plots(in_dir, out_dir) -> dict:
    """Signal curve from figure-1.csv, one scatter per figure-2-*.csv."""
    in_dir = Path(in_dir)
    curve_csv = in_dir / "figure-1.csv"
    scatter_csvs = sorted(in_dir.glob("figure-2-*.csv"))
    if not curve_csv.exists() or not scatter_csvs:
        present = ", ".join(p.name for p in sorted(in_dir.glob("*.csv")))
        raise SchemaError(
            f"{in_dir}: need figure-1.csv and at least one figure-2-*.csv; "
            f"found [{present}]")

    os.makedirs(out_dir, exist_ok=True)
    report = {"outputs": [], "inputs": {}, "scatter_points": {}}

    rows = _read_rows(curve_csv, ("x", "m"))
    xs = [_float_cell(r, "x", curve_csv, i)
          for i, r in enumerate(rows, start=2)]
    ms = [_float_cell(r, "m", curve_csv, i)
          for i, r in enumerate(rows, start=2)]
    fig, ax = _new_axes()
    ax.plot(xs, ms, color=ADAPTIVE_COLOR, linewidth=1.0)
    ax.set_xlabel("x")
    ax.set_ylabel("m(x)")
    ax.set_title("regression signal")
    curve_out = os.path.join(out_dir, "signal-curve.png")
    fig.savefig(curve_out)
    report["outputs"].append(curve_out)
    report["inputs"][str(curve_csv)] = _sha256(curve_csv)
    report["curve_points"] = len(xs)
    report["curve_endpoints"] = [ms[0], ms[-1]]

    for path in scatter_csvs:
        slug = path.stem.removeprefix("figure-2-")
        rows = _read_rows(path, ("w", "y"))
        ws = [_float_cell(r, "w", path, i)
              for i, r in enumerate(rows, start=2)]
        ys = [_float_cell(r, "y", path, i)
              for i, r in enumerate(rows, start=2)]
        fig, ax = _new_axes()
        points = ax.scatter(ws, ys, s=6, color=ADAPTIVE_COLOR, alpha=0.6)
        ax.set_xlabel("w")
        ax.set_ylabel("y")
        ax.set_title(f"noisy sample, design {slug}")
        out_path = os.path.join(out_dir, f"scatter-{slug}.png")
        fig.savefig(out_path)
        report["outputs"].append(out_path)
        report["inputs"][str(path)] = _sha256(path)
        report["scatter_points"][slug] = int(points.get_offsets().shape[0])
    return report
