"""Readers for the simulator's output files and the two figure renderers.

The histogram figure shows total operation counts per run with vertical
lines at the simulated and analytical means. The ratio-and-total figure
stacks classical/quantum latency-share bars per link length above the mean
total latency on a logarithmic axis. Coordinate dumps expose exactly the
numbers handed to the plotting calls, so tests can compare them against
the input files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

HIST_HEADER = "bin_lo,bin_hi,count"
SWEEP_HEADER = (
    "L_km,p,mean_n_e,mean_n_s,mean_n_f,mean_tau_classical_s,"
    "mean_tau_quantum_s,mean_total_s,classical_share,feasible_frac"
)

CLASSICAL_COLOR = "grey"
QUANTUM_COLOR = "tab:blue"


class SchemaError(ValueError):
    """An input file does not match the expected schema."""


@dataclass(frozen=True)
class HistBin:
    lo: float
    hi: float
    count: int


@dataclass(frozen=True)
class SweepRow:
    L_km: float
    classical_share: float
    mean_total_s: float


@dataclass(frozen=True)
class FigureSpec:
    """One render job: figure kind, input files, and output image path."""

    kind: str  # "histogram" or "ratio-and-total"
    inputs: tuple[str, ...]
    output: str


def _read_rows(path, header, n_fields):
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if not lines or lines[0] != header:
        raise SchemaError(f"{path}: expected header {header!r}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != n_fields:
            raise SchemaError(f"{path}:{lineno}: expected {n_fields} fields, got {len(parts)}")
        rows.append(parts)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def load_hist_csv(path) -> list[HistBin]:
    """Parse a histogram CSV (bin_lo,bin_hi,count)."""
    bins = []
    for parts in _read_rows(path, HIST_HEADER, 3):
        try:
            bins.append(HistBin(lo=float(parts[0]), hi=float(parts[1]), count=int(parts[2])))
        except ValueError as exc:
            raise SchemaError(f"{path}: bad histogram row {parts}: {exc}") from exc
    return bins


def load_means(path) -> tuple[float, float]:
    """Simulated and analytical total-operation means from validate.json."""
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read means from {path}: {exc}") from exc
    try:
        return float(payload["mc_mean"]["total_ops"]), float(payload["analytic"]["total_ops"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"{path}: missing mc_mean/analytic total_ops: {exc}") from exc


def load_sweep_csv(path) -> list[SweepRow]:
    """Parse a sweep CSV; only the plotted columns are retained."""
    rows = []
    for parts in _read_rows(path, SWEEP_HEADER, 10):
        try:
            rows.append(
                SweepRow(
                    L_km=float(parts[0]),
                    classical_share=float(parts[8]),
                    mean_total_s=float(parts[7]),
                )
            )
        except ValueError as exc:
            raise SchemaError(f"{path}: bad sweep row {parts}: {exc}") from exc
    return rows


def dump_histogram_coords(bins: list[HistBin], mc_mean: float, analytic_mean: float) -> str:
    """Plotted numbers as text, one line per drawn element."""
    lines = [f"bin,{b.lo!r},{b.hi!r},{b.count}" for b in bins]
    lines.append(f"mean,mc,{mc_mean!r}")
    lines.append(f"mean,analytic,{analytic_mean!r}")
    return "\n".join(lines)


def dump_sweep_coords(rows: list[SweepRow]) -> str:
    """Plotted numbers as text: stacked shares, then totals."""
    lines = [
        f"share,{r.L_km!r},{r.classical_share!r},{(1.0 - r.classical_share)!r}" for r in rows
    ]
    lines.extend(f"total,{r.L_km!r},{r.mean_total_s!r}" for r in rows)
    return "\n".join(lines)


def render_histogram(bins: list[HistBin], mc_mean: float, analytic_mean: float, out_path):
    """Bar histogram of total operations with labelled mean lines."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    widths = [b.hi - b.lo for b in bins]
    # A degenerate single-point histogram still needs visible bars.
    if all(w == 0 for w in widths):
        widths = [1.0] * len(bins)
    ax.bar(
        [b.lo for b in bins],
        [b.count for b in bins],
        width=widths,
        align="edge",
        color="tab:gray",
        edgecolor="white",
    )
    ax.axvline(mc_mean, color="tab:red", linestyle="-", label=f"simulated mean = {mc_mean:.0f}")
    ax.axvline(
        analytic_mean,
        color="tab:blue",
        linestyle="--",
        label=f"analytical mean = {analytic_mean:.0f}",
    )
    ax.set_xlabel("total quantum operations per run")
    ax.set_ylabel("runs")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_ratio_and_total(rows: list[SweepRow], out_path):
    """Stacked share bars over link length, with total latency below."""
    fig, (ax_share, ax_total) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    lengths = [r.L_km for r in rows]
    classical = [r.classical_share for r in rows]
    quantum = [1.0 - r.classical_share for r in rows]
    ax_share.bar(lengths, classical, color=CLASSICAL_COLOR, label="classical")
    ax_share.bar(lengths, quantum, bottom=classical, color=QUANTUM_COLOR, label="quantum")
    ax_share.set_ylabel("latency share")
    ax_share.set_ylim(0, 1)
    ax_share.legend(loc="lower right")
    ax_total.plot(lengths, [r.mean_total_s for r in rows], marker="o", color="black")
    ax_total.set_yscale("log")
    ax_total.set_xlabel("link length L (km)")
    ax_total.set_ylabel("mean total latency (s)")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_figure(spec: FigureSpec) -> str:
    """Load the job's inputs, render the image, return the coordinate dump."""
    if spec.kind == "histogram":
        hist_path, means_path = spec.inputs
        bins = load_hist_csv(hist_path)
        mc_mean, analytic_mean = load_means(means_path)
        render_histogram(bins, mc_mean, analytic_mean, spec.output)
        return dump_histogram_coords(bins, mc_mean, analytic_mean)
    if spec.kind == "ratio-and-total":
        (sweep_path,) = spec.inputs
        rows = load_sweep_csv(sweep_path)
        render_ratio_and_total(rows, spec.output)
        return dump_sweep_coords(rows)
    raise SchemaError(f"unknown figure kind {spec.kind!r}")
