#!/usr/bin/env python3
"""Benchmark the jitted protocol kernel against the pure fallback.

Both backends run the same trials with the same substreams and must return
identical counts; the report is JSON on stdout (or --output).
"""

import argparse
import json
import sys
import time

import numpy as np

from medsim import _kernels
from medsim.latency import success_prob

WARMUP_TRIALS = 50


def run_backend(protocol_counts, segments, log1m_p, q, k, trials, master_seed):
    checks = 0
    start = time.perf_counter()
    for i in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence([master_seed, i]))
        n_e, n_s, n_f = protocol_counts(segments, log1m_p, q, k, 10**9, rng)
        checks += n_e + n_s + n_f
    elapsed = time.perf_counter() - start
    return elapsed, checks


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=2000)
    parser.add_argument("--edge-length-km", type=float, default=2.0)
    parser.add_argument("--seed", type=int, default=20123)
    parser.add_argument("--output", help="write the JSON report to this file")
    args = parser.parse_args()

    if not _kernels.NUMBA_ENABLED:
        print(
            "numba backend unavailable (is MEDSIM_NO_NUMBA set?); nothing to compare",
            file=sys.stderr,
        )
        return 1

    segments = np.array([6, 7, 7, 8], dtype=np.int64)
    p = success_prob(args.edge_length_km)
    log1m_p = _kernels.log1m(p)
    q, k = 0.7, 0.5

    # Warm-up triggers JIT compilation outside the timed region.
    run_backend(_kernels.protocol_counts, segments, log1m_p, q, k, WARMUP_TRIALS, args.seed)

    report = {"benchmark": "protocol_counts", "trials": args.trials, "p": p, "q": q, "k": k}
    t_jit, sum_jit = run_backend(
        _kernels.protocol_counts, segments, log1m_p, q, k, args.trials, args.seed
    )
    t_py, sum_py = run_backend(
        _kernels.py_protocol_counts, segments, log1m_p, q, k, args.trials, args.seed
    )
    if sum_jit != sum_py:
        print(f"backend mismatch: numba {sum_jit} != pure {sum_py}", file=sys.stderr)
        return 1
    report["numba"] = {"seconds": t_jit, "trials_per_s": args.trials / t_jit}
    report["pure"] = {"seconds": t_py, "trials_per_s": args.trials / t_py}
    report["speedup"] = t_py / t_jit
    report["ops_checksum"] = sum_jit

    text = json.dumps(report, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
