"""Deterministic matplotlib rendering of fbsec study CSVs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .recipes import FigureRecipe, RecipeError, read_rows

#: Pinned style: same canvas, fonts and colors on every run.
_RC = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 120,
    "savefig.dpi": 120,
    "font.family": "DejaVu Sans",
    "font.size": 9.0,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.6,
    "svg.hashsalt": "fbsec-plots",
}

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_BAND_SIGMAS = 3.0


def _floats(rows, column):
    return np.asarray([float(r[column]) for r in rows])


def _series_groups(rows, column):
    """Rows grouped by the series column, deterministic order."""
    keys = []
    for row in rows:
        if row[column] not in keys:
            keys.append(row[column])

    def sort_key(k):
        try:
            return (0, float(k), k)
        except ValueError:
            return (1, 0.0, k)

    return [(k, [r for r in rows if r[column] == k]) for k in sorted(keys, key=sort_key)]


def _plot_with_band(ax, rows, y_column, label, color):
    x = _floats(rows, "N")
    y = _floats(rows, y_column)
    order = np.argsort(x)
    x, y = x[order], y[order]
    ax.plot(x, y, label=label, color=color, marker="o", markersize=3)
    stderr_col = f"{y_column}_stderr"
    if rows and stderr_col in rows[0]:
        se = _floats(rows, stderr_col)[order]
        if np.any(se > 0):
            ax.fill_between(
                x, y - _BAND_SIGMAS * se, y + _BAND_SIGMAS * se, color=color, alpha=0.2, linewidth=0
            )


def build_figure(recipe: FigureRecipe):
    """Build the matplotlib figure; returns (figure, meta) without saving.

    meta records what was drawn (series labels, shaded spans, warnings)
    so callers and tests can introspect without parsing the image.
    """
    rows = read_rows(recipe)
    meta = {"study": recipe.study, "series": [], "shaded_spans": 0, "warnings": []}
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        if recipe.study == "rate-bounds":
            _plot_with_band(ax, rows, "achievable", "achievable", _COLORS[0])
            _plot_with_band(ax, rows, "converse", "converse", _COLORS[1])
            cs = float(rows[0]["achievable"]) + float(rows[0]["capacity_gap"])
            ax.axhline(cs, color="0.3", linestyle="--", linewidth=1.0, label="secrecy capacity")
            meta["series"] = ["achievable", "converse"]
            meta["asymptote"] = cs
        elif recipe.study == "effective-throughput":
            _plot_with_band(ax, rows, "throughput", "effective throughput", _COLORS[0])
            meta["series"] = ["effective throughput"]
            if recipe.shade_infeasible:
                meta["shaded_spans"] = _shade_infeasible(ax, rows)
            if not any(r["feasible"] == "true" for r in rows):
                message = "no grid point satisfies the outage budget"
                meta["warnings"].append(message)
                ax.annotate(
                    message,
                    xy=(0.5, 0.5),
                    xycoords="axes fraction",
                    ha="center",
                    color="#a00000",
                )
        else:
            column = recipe.series_column
            for i, (key, group) in enumerate(_series_groups(rows, column)):
                label = f"{column}={key}" if column != "scheme" else key
                _plot_with_band(ax, group, "throughput", label, _COLORS[i % len(_COLORS)])
                meta["series"].append(label)
        ax.set_xscale(recipe.x_scale)
        ax.set_xlabel(recipe.x_label)
        ax.set_ylabel(recipe.y_label)
        ax.set_title(recipe.title)
        ax.legend(loc="best")
        fig.tight_layout()
    return fig, meta


def _shade_infeasible(ax, rows) -> int:
    """Shade contiguous runs of infeasible blocklengths; returns span count."""
    pairs = sorted((float(r["N"]), r["feasible"] == "true") for r in rows)
    xs = [p[0] for p in pairs]
    spans = []
    start = None
    for i, (x, ok) in enumerate(pairs):
        if not ok and start is None:
            start = xs[i - 1] if i > 0 else x
        elif ok and start is not None:
            spans.append((start, x))
            start = None
    if start is not None:
        spans.append((start, xs[-1]))
    for lo, hi in spans:
        ax.axvspan(lo, hi, color="0.75", alpha=0.5, zorder=0)
    if spans:
        ax.plot([], [], color="0.75", linewidth=8, alpha=0.5, label="infeasible (p_out >= zeta)")
    return len(spans)


def render(recipe: FigureRecipe, out_path) -> dict:
    """Render the recipe to an image file; returns the build meta.

    Nothing is written when validation fails (schema mismatch, empty
    CSV), so a pre-existing file is never clobbered by a bad input.
    """
    out_path = Path(out_path)
    fig, meta = build_figure(recipe)
    try:
        out_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out_path, format=out_path.suffix.lstrip(".") or "png")
    finally:
        plt.close(fig)
    meta["out_path"] = str(out_path)
    return meta
