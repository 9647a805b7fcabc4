"""Figure specifications: which CSV to draw, how, and where to write it.

A spec is a small JSON document referencing a results.csv (and optionally
its manifest.json) produced by the mpdsim CLI. Rendering never imports the
simulator; the CSV header is the contract.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

FIGURE_KINDS = ("lgi-sweep-line", "beta-heatmap", "qpi-curves")

#: Columns each figure kind needs in its input CSV. The lgi-sweep-line kind
#: additionally needs exactly one sweep-axis column (ds or sigma0).
REQUIRED_COLUMNS = {
    "lgi-sweep-line": ("ka", "kv", "violation"),
    "beta-heatmap": ("beta1", "beta2", "violation"),
    "qpi-curves": ("x21", "constructive_margin", "destructive_margin",
                   "p123_1211", "p123_211"),
}

AXIS_COLUMNS = ("ds", "sigma0")


class FigureSpecError(ValueError):
    """Invalid figure specification or CSV not matching its schema."""


@dataclass(frozen=True)
class FigureSpec:
    """One figure: input CSV, rendering kind, labels and output path."""

    kind: str
    csv: str
    out: str
    manifest: str | None = None
    title: str = ""
    labels: dict = field(default_factory=dict)
    dpi: int = 150

    def __post_init__(self) -> None:
        if self.kind not in FIGURE_KINDS:
            raise FigureSpecError(
                f"unknown figure kind {self.kind!r}; expected one of "
                f"{', '.join(FIGURE_KINDS)}"
            )
        if not self.csv or not self.out:
            raise FigureSpecError("spec needs both csv and out paths")
        if self.dpi <= 0:
            raise FigureSpecError("dpi must be positive")


def load_spec(path: str) -> FigureSpec:
    """Read a JSON figure spec from disk."""
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    if not isinstance(raw, dict):
        raise FigureSpecError("spec must be a JSON object")
    known = {"kind", "csv", "out", "manifest", "title", "labels", "dpi"}
    extra = set(raw) - known
    if extra:
        raise FigureSpecError(f"unknown spec fields: {sorted(extra)}")
    missing = {"kind", "csv", "out"} - set(raw)
    if missing:
        raise FigureSpecError(f"spec missing required fields: {sorted(missing)}")
    return FigureSpec(**raw)
