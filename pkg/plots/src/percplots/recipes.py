"""Figure recipes: what to read, which figure kind, where to write.

A recipe never computes statistics; it only points at artifact files whose
columns are validated strictly (a missing or misspelled column is a hard
error listing the difference).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

FIGURE_KINDS = ("sweep", "component-size", "threshold-summary", "search-trace")

SWEEP_COLUMNS = ("model", "family", "dim", "L", "param", "spanning_prob",
                 "stderr", "trials", "seed")
COMPONENT_COLUMNS = ("model", "family", "dim", "L", "param", "largest_fraction",
                     "stderr", "trials", "seed")
SUMMARY_COLUMNS = ("family", "dim", "model", "lambda_c", "error")

REQUIRED_COLUMNS = {
    "sweep": SWEEP_COLUMNS,
    "component-size": COMPONENT_COLUMNS,
    "threshold-summary": SUMMARY_COLUMNS,
}


class RecipeError(ValueError):
    """Malformed recipe or artifact."""


@dataclass(frozen=True)
class FigureRecipe:
    kind: str
    inputs: tuple[Path, ...]
    output: Path
    title: str = ""
    x_range: tuple[float, float] | None = None
    y_range: tuple[float, float] | None = None
    threshold_file: Path | None = None

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise RecipeError(f"unknown figure kind {self.kind!r}; "
                              f"expected one of {FIGURE_KINDS}")
        if not self.inputs:
            raise RecipeError("recipe lists no input artifacts")


def load_recipe(path) -> FigureRecipe:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise RecipeError(f"recipe is not valid JSON: {exc}") from exc
    unknown = set(doc) - {"kind", "inputs", "output", "title", "x_range",
                          "y_range", "threshold_file"}
    if unknown:
        raise RecipeError(f"unknown recipe fields: {sorted(unknown)}")
    for required in ("kind", "inputs", "output"):
        if required not in doc:
            raise RecipeError(f"recipe is missing the {required!r} field")
    base = path.parent
    inputs = tuple(base / p for p in doc["inputs"])
    threshold = base / doc["threshold_file"] if doc.get("threshold_file") else None
    return FigureRecipe(
        kind=doc["kind"], inputs=inputs, output=base / doc["output"],
        title=doc.get("title", ""),
        x_range=tuple(doc["x_range"]) if doc.get("x_range") else None,
        y_range=tuple(doc["y_range"]) if doc.get("y_range") else None,
        threshold_file=threshold)


def read_table(path: Path, kind: str) -> list[dict]:
    """Read a CSV artifact, enforcing the exact column set for the kind."""
    path = Path(path)
    if not path.exists():
        raise RecipeError(f"input artifact {path} does not exist")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise RecipeError(f"{path} is empty: no header row")
        required = REQUIRED_COLUMNS[kind]
        missing = [c for c in required if c not in reader.fieldnames]
        extra = [c for c in reader.fieldnames if c not in required]
        if missing:
            raise RecipeError(
                f"{path} does not match the {kind} schema: "
                f"missing columns {missing}, unexpected columns {extra}")
        rows = list(reader)
    if not rows:
        raise RecipeError(f"{path} contains a header but no data rows")
    return rows


def read_threshold_json(path: Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise RecipeError(f"threshold file {path} does not exist")
    doc = json.loads(path.read_text(encoding="utf-8"))
    missing = {"lambda_c", "error", "crossings"} - set(doc)
    if missing:
        raise RecipeError(f"{path} lacks threshold fields {sorted(missing)}")
    return doc


def read_search_log(path: Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise RecipeError(f"search log {path} does not exist")
    doc = json.loads(path.read_text(encoding="utf-8"))
    if "history" not in doc or not doc["history"]:
        raise RecipeError(f"{path} has no search history")
    return doc
