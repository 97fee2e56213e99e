"""Deterministic figure rendering (pure views of the artifact data)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .recipes import (FigureRecipe, RecipeError, read_search_log, read_table,
                      read_threshold_json)

# fixed style + hash salt so repeated renders are byte-identical
STYLE = {
    "figure.figsize": (5.2, 3.6),
    "font.size": 9.0,
    "axes.linewidth": 0.8,
    "svg.hashsalt": "percplots",
    "svg.fonttype": "none",
    "path.simplify": False,
}

MARKERS = ("o", "s", "D", "^", "v", "p")


@dataclass
class FigureData:
    """Exactly the numbers drawn, per labeled series (for spot checks)."""

    series: dict[str, dict[str, np.ndarray]] = field(default_factory=dict)

    def add(self, label, x, y, err=None):
        self.series[label] = {"x": np.asarray(x, dtype=float),
                              "y": np.asarray(y, dtype=float)}
        if err is not None:
            self.series[label]["err"] = np.asarray(err, dtype=float)


BASE_COLOR = (0.10, 0.35, 0.80)


def _shade(index: int, count: int):
    """Lighter (whiter) colors for earlier, smaller-L series."""
    s = 0.35 + 0.65 * (index + 1) / count
    return tuple(1.0 - s * (1.0 - c) for c in BASE_COLOR) + (1.0,)


def _group_by_size(rows, value_column):
    groups: dict[int, list] = {}
    for row in rows:
        groups.setdefault(int(row["L"]), []).append(
            (float(row["param"]), float(row[value_column]), float(row["stderr"])))
    for rows_l in groups.values():
        rows_l.sort()
    return dict(sorted(groups.items()))


def _curve_figure(recipe, value_column, ylabel):
    fig, ax = plt.subplots()
    data = FigureData()
    rows = []
    for path in recipe.inputs:
        rows.extend(read_table(path, recipe.kind))
    groups = _group_by_size(rows, value_column)
    count = len(groups)
    for i, (length, pts) in enumerate(groups.items()):
        x, y, err = (np.array(v) for v in zip(*pts))
        label = f"L={length}"
        ax.errorbar(x, y, yerr=err, marker=MARKERS[i % len(MARKERS)], ms=3.5,
                    lw=1.0, capsize=2, color=_shade(i, count), label=label)
        data.add(label, x, y, err)
    if recipe.kind == "sweep" and recipe.threshold_file is not None:
        doc = read_threshold_json(recipe.threshold_file)
        lam, err = doc["lambda_c"], doc["error"]
        ax.axvline(lam, color="0.25", lw=0.9, ls="--")
        ax.annotate(f"$\\lambda_c$ = {lam:.4f} $\\pm$ {err:.4f}",
                    xy=(lam, 0.05), xycoords=("data", "axes fraction"),
                    fontsize=8, rotation=90, va="bottom", ha="right")
        for crossing in doc["crossings"]:
            ax.plot([crossing["lambda"]], [0.5], marker="x", color="0.25", ms=5)
        data.add("threshold", [lam], [0.5], [err])
        ax.axhline(0.5, color="0.8", lw=0.6)
    model = rows[0]["model"]
    ax.set_xlabel("photon efficiency $\\eta$" if model in ("spin", "photon")
                  else "occupation probability $p$")
    ax.set_ylabel(ylabel)
    ax.legend(frameon=False, fontsize=8)
    return fig, ax, data


def _threshold_summary_figure(recipe):
    fig, ax = plt.subplots()
    data = FigureData()
    rows = []
    for path in recipe.inputs:
        rows.extend(read_table(path, recipe.kind))
    series: dict[tuple[str, str], list] = {}
    for row in rows:
        key = (row["family"], row["model"])
        series.setdefault(key, []).append(
            (int(row["dim"]), float(row["lambda_c"]), float(row["error"])))
    for i, ((family, model), pts) in enumerate(sorted(series.items())):
        pts.sort()
        x, y, err = (np.array(v) for v in zip(*pts))
        style = "-" if model == "spin" else "--"
        label = f"{family} ({model})"
        ax.errorbar(x, y, yerr=err, marker=MARKERS[i % len(MARKERS)], ms=4,
                    lw=1.0, ls=style, capsize=2, label=label)
        data.add(label, x, y, err)
    ax.set_xlabel("dimension $d$")
    ax.set_ylabel("loss threshold $\\lambda_c^{\\eta}$")
    ax.legend(frameon=False, fontsize=7)
    return fig, ax, data


def _search_trace_figure(recipe):
    fig, ax = plt.subplots()
    data = FigureData()
    doc = read_search_log(recipe.inputs[0])
    steps, values, accepted_steps, accepted_values = [], [], [], []
    for move in doc["history"]:
        if move["lambda_c"] is None or not math.isfinite(move["lambda_c"]):
            continue
        steps.append(move["evaluations_used"])
        values.append(move["lambda_c"])
        if move["action"] in ("init", "accept", "remove"):
            accepted_steps.append(move["evaluations_used"])
            accepted_values.append(move["lambda_c"])
    if not steps:
        raise RecipeError("search log contains no finite threshold evaluations")
    ax.plot(steps, values, marker=".", ms=4, lw=0.6, color="0.6",
            label="evaluations")
    ax.plot(accepted_steps, accepted_values, marker="o", ms=5, lw=1.2,
            color="tab:blue", label="accepted")
    data.add("evaluations", steps, values)
    data.add("accepted", accepted_steps, accepted_values)
    ax.set_xlabel("threshold evaluations")
    ax.set_ylabel("estimated $\\lambda_c^{\\eta}$")
    ax.legend(frameon=False, fontsize=8)
    return fig, ax, data


def render(recipe: FigureRecipe):
    """Draw the recipe's figure; returns (figure, data actually plotted)."""
    with plt.rc_context(STYLE):
        if recipe.kind == "sweep":
            fig, ax, data = _curve_figure(recipe, "spanning_prob",
                                          "spanning probability")
        elif recipe.kind == "component-size":
            fig, ax, data = _curve_figure(recipe, "largest_fraction",
                                          "largest component fraction")
        elif recipe.kind == "threshold-summary":
            fig, ax, data = _threshold_summary_figure(recipe)
        elif recipe.kind == "search-trace":
            fig, ax, data = _search_trace_figure(recipe)
        else:  # pragma: no cover - guarded by FigureRecipe
            raise RecipeError(f"unhandled kind {recipe.kind}")
        if recipe.title:
            ax.set_title(recipe.title, fontsize=9)
        if recipe.x_range:
            ax.set_xlim(*recipe.x_range)
        if recipe.y_range:
            ax.set_ylim(*recipe.y_range)
        fig.tight_layout()
    return fig, data


def save(fig, output) -> None:
    """Write the figure deterministically (SVG without volatile metadata)."""
    from pathlib import Path

    Path(output).parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context(STYLE):
        fig.savefig(output, format="svg", metadata={"Date": None})
    plt.close(fig)
