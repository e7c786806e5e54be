"""Entry points for the two figure commands.

plot-hist  --hist hist.csv --means validate.json --out fig2.png
plot-sweep --sweep sweep.csv --out fig3.png

Both accept --dump-coords, which prints the plotted numbers to stdout so
tests can check them against the input files. Schema mismatches exit 2.
"""

from __future__ import annotations

import argparse
import sys

from .figures import FigureSpec, SchemaError, render_figure

EXIT_OK = 0
EXIT_SCHEMA_ERROR = 2


def _run(spec: FigureSpec, dump_coords: bool) -> int:
    try:
        dump = render_figure(spec)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA_ERROR
    if dump_coords:
        print(dump)
    return EXIT_OK


def main_hist(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-hist", description="histogram of total operations with mean overlays"
    )
    parser.add_argument("--hist", required=True, help="histogram CSV (bin_lo,bin_hi,count)")
    parser.add_argument("--means", required=True, help="validate.json with the mean values")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument(
        "--dump-coords", action="store_true", help="print the plotted numbers to stdout"
    )
    args = parser.parse_args(argv)
    spec = FigureSpec(kind="histogram", inputs=(args.hist, args.means), output=args.out)
    return _run(spec, args.dump_coords)


def main_sweep(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-sweep", description="latency share and total latency over link length"
    )
    parser.add_argument("--sweep", required=True, help="sweep CSV from the simulator")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument(
        "--dump-coords", action="store_true", help="print the plotted numbers to stdout"
    )
    args = parser.parse_args(argv)
    spec = FigureSpec(kind="ratio-and-total", inputs=(args.sweep,), output=args.out)
    return _run(spec, args.dump_coords)


if __name__ == "__main__":
    sys.exit(main_hist())
