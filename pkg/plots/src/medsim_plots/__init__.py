"""Static figure rendering for medsim output files.

Pure views: the plot scripts read the CSV/JSON files produced by the
simulator CLI and never recompute simulation quantities.
"""

__version__ = "0.1.0"

from .figures import (
    FigureSpec,
    HistBin,
    SchemaError,
    SweepRow,
    dump_histogram_coords,
    dump_sweep_coords,
    load_hist_csv,
    load_means,
    load_sweep_csv,
    render_figure,
    render_histogram,
    render_ratio_and_total,
)

__all__ = [
    "FigureSpec",
    "HistBin",
    "SchemaError",
    "SweepRow",
    "dump_histogram_coords",
    "dump_sweep_coords",
    "load_hist_csv",
    "load_means",
    "load_sweep_csv",
    "render_figure",
    "render_histogram",
    "render_ratio_and_total",
]
