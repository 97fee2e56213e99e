"""Deterministic CSV/JSON artifact writing plus the run manifest.

Data files are byte-reproducible: fixed column order, fixed float formatting,
LF newlines, and no timestamps.  The manifest records command, parameters,
seed, code version, and the produced files; timestamps live only there.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__

SWEEP_COLUMNS = ("model", "family", "dim", "L", "param", "spanning_prob",
                 "stderr", "trials", "seed")
COMPONENT_COLUMNS = ("model", "family", "dim", "L", "param", "largest_fraction",
                     "stderr", "trials", "seed")
EDGE_COLUMNS = ("u", "v", "vector_id")


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


def write_csv(path: Path, columns, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def write_json(path: Path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


@dataclass
class RunManifest:
    """Provenance record for one CLI run; every artifact is listed here."""

    command: str
    parameters: dict
    seed: int | None
    outputs: list[str] = field(default_factory=list)
    version: str = __version__

    def register(self, path: Path) -> Path:
        name = Path(path).name
        if name not in self.outputs:
            self.outputs.append(name)
        return Path(path)

    def write(self, out_dir: Path) -> Path:
        payload = {
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "outputs": sorted(self.outputs),
            "version": self.version,
            "created_utc": datetime.now(timezone.utc).isoformat(),
        }
        return write_json(Path(out_dir) / "manifest.json", payload)


def sweep_rows(curves, family: str, dim: int, seed: int):
    for curve in curves:
        for param, prob, err, trials in curve.rows():
            yield (curve.model, family, dim, curve.length, param, prob, err,
                   trials, seed)
