"""Figure rendering for mpdsim CSV/manifest artifacts."""

from .render import (
    RENDERERS,
    manifest_footer,
    read_table,
    render,
    render_beta_heatmap,
    render_lgi_sweep_line,
    render_qpi_curves,
)
from .spec import (
    AXIS_COLUMNS,
    FIGURE_KINDS,
    REQUIRED_COLUMNS,
    FigureSpec,
    FigureSpecError,
    load_spec,
)

__version__ = "0.1.0"

__all__ = [
    "AXIS_COLUMNS",
    "FIGURE_KINDS",
    "REQUIRED_COLUMNS",
    "RENDERERS",
    "FigureSpec",
    "FigureSpecError",
    "load_spec",
    "manifest_footer",
    "read_table",
    "render",
    "render_beta_heatmap",
    "render_lgi_sweep_line",
    "render_qpi_curves",
]
