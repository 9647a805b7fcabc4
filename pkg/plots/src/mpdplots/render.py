"""Render mpdsim result CSVs into figures.

Each renderer validates the CSV header against the columns its figure kind
needs and fails with the missing column named. When the spec references the
run's manifest.json, the figure carries a caption footer with the first 12
hex digits of the manifest file's SHA-256 so a figure can be traced back to
the exact run that produced it.
"""

from __future__ import annotations

import csv
import hashlib
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .spec import AXIS_COLUMNS, REQUIRED_COLUMNS, FigureSpec, FigureSpecError


def read_table(path: str, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    """Load a results.csv as named float columns, checking the schema."""
    with open(path, newline="", encoding="ascii") as f:
        reader = csv.DictReader(f)
        header = reader.fieldnames
        if not header:
            raise FigureSpecError(f"{path}: empty CSV, no header row")
        for col in required:
            if col not in header:
                raise FigureSpecError(
                    f"{path}: missing required column {col!r}; "
                    f"header has {header}"
                )
        rows = list(reader)
    if not rows:
        raise FigureSpecError(f"{path}: no data rows")
    out: dict[str, np.ndarray] = {}
    for col in header:
        values = [r[col] for r in rows]
        if values[0] in ("true", "false"):
            out[col] = np.array([v == "true" for v in values])
        else:
            out[col] = np.array([float(v) for v in values])
    return out


def manifest_footer(manifest_path: str) -> str:
    """Caption fragment binding a figure to its manifest file."""
    with open(manifest_path, "rb") as f:
        digest = hashlib.sha256(f.read()).hexdigest()
    return f"run {digest[:12]}"


def _finish(fig, spec: FigureSpec) -> str:
    parts = [os.path.basename(spec.csv)]
    if spec.manifest:
        parts.append(manifest_footer(spec.manifest))
    footer = " | ".join(parts)
    fig.text(0.99, 0.01, footer, ha="right", va="bottom",
             fontsize=7, color="0.4")
    os.makedirs(os.path.dirname(os.path.abspath(spec.out)), exist_ok=True)
    fig.savefig(spec.out, dpi=spec.dpi, bbox_inches="tight")
    plt.close(fig)
    return footer


def _axis_column(table: dict[str, np.ndarray], path: str) -> str:
    present = [c for c in AXIS_COLUMNS if c in table]
    if len(present) != 1:
        raise FigureSpecError(
            f"{path}: need exactly one sweep-axis column of {AXIS_COLUMNS}, "
            f"found {present or 'none'}"
        )
    return present[0]


def render_lgi_sweep_line(spec: FigureSpec) -> str:
    """Dual-axis line plot: violation (left) and signaling K_V - 1 (right)
    against the sweep axis."""
    table = read_table(spec.csv, REQUIRED_COLUMNS["lgi-sweep-line"])
    axis = _axis_column(table, spec.csv)
    x = table[axis]
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.plot(x, table["violation"], color="tab:blue", lw=1.2,
            label=r"$K_A - K_V$")
    ax.axhline(0.0, color="0.7", lw=0.8)
    ax.set_xlabel(spec.labels.get("x", axis + r" ($\mu$m)"))
    ax.set_ylabel(spec.labels.get("y", r"violation $K_A - K_V$"),
                  color="tab:blue")
    ax.tick_params(axis="y", colors="tab:blue")
    ax2 = ax.twinx()
    ax2.plot(x, table["kv"] - 1.0, color="tab:red", lw=1.0, ls="--",
             label=r"$K_V - 1$")
    ax2.set_ylabel(spec.labels.get("y2", r"signaling $K_V - 1$"),
                   color="tab:red")
    ax2.tick_params(axis="y", colors="tab:red")
    if spec.title:
        ax.set_title(spec.title)
    return _finish(fig, spec)


def render_beta_heatmap(spec: FigureSpec) -> str:
    """Violation over the (beta1, beta2) slit-width grid."""
    table = read_table(spec.csv, REQUIRED_COLUMNS["beta-heatmap"])
    b1 = np.unique(table["beta1"])
    b2 = np.unique(table["beta2"])
    grid = np.full((b2.size, b1.size), np.nan)
    i1 = np.searchsorted(b1, table["beta1"])
    i2 = np.searchsorted(b2, table["beta2"])
    grid[i2, i1] = table["violation"]
    fig, ax = plt.subplots(figsize=(6.0, 4.8))
    mesh = ax.pcolormesh(b1, b2, grid, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=spec.labels.get("z", r"violation $K_A - K_V$"))
    ax.set_xlabel(spec.labels.get("x", r"$\beta_1$ ($\mu$m)"))
    ax.set_ylabel(spec.labels.get("y", r"$\beta_2$ ($\mu$m)"))
    if spec.title:
        ax.set_title(spec.title)
    return _finish(fig, spec)


def render_qpi_curves(spec: FigureSpec) -> str:
    """Two panels against the second-plane slit position: interference
    margins on top, final-plane probabilities below."""
    table = read_table(spec.csv, REQUIRED_COLUMNS["qpi-curves"])
    x = table["x21"]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7.0, 6.0), sharex=True)
    ax1.plot(x, table["constructive_margin"], color="tab:green", lw=1.0,
             label="constructive (plane 2)")
    ax1.plot(x, table["destructive_margin"], color="tab:purple", lw=1.0,
             label="destructive (plane 3)")
    ax1.axhline(0.0, color="0.7", lw=0.8)
    ax1.set_ylabel(spec.labels.get("y", "interference margin"))
    ax1.legend(loc="best", fontsize=8)
    ax2.plot(x, table["p123_1211"], color="tab:orange", lw=1.0,
             label="both paths open")
    ax2.plot(x, table["p123_211"], color="tab:gray", lw=1.0, ls="--",
             label="single path")
    ax2.set_ylabel(spec.labels.get("y2", "final-plane probability"))
    ax2.set_xlabel(spec.labels.get("x", r"$x_{21}$ ($\mu$m)"))
    ax2.legend(loc="best", fontsize=8)
    if spec.title:
        ax1.set_title(spec.title)
    return _finish(fig, spec)


RENDERERS = {
    "lgi-sweep-line": render_lgi_sweep_line,
    "beta-heatmap": render_beta_heatmap,
    "qpi-curves": render_qpi_curves,
}


def render(spec: FigureSpec) -> str:
    """Render the figure described by the spec; returns the caption footer."""
    return RENDERERS[spec.kind](spec)
