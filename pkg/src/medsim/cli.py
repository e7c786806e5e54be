"""Command-line entry points and machine-readable outputs.

Subcommands: validate (Monte Carlo vs analytical chain), sweep (latency
decomposition over link lengths), hist (per-trial records and the
total-operations histogram). A config file is JSON with every key optional;
defaults reproduce the reference runs (8x8 grid, corner users, q=0.7,
k=0.5, trapped-ion device times, 10000 trials). All file outputs use km and
seconds, dot decimals, and \n newlines, and are byte-identical under a
fixed seed.

Exit codes: 0 success/pass, 1 validation fail, 2 configuration error,
3 runtime abort (operation cap).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, latency, markov, montecarlo
from .errors import ConfigurationError, OpCapExceededError, ParameterError

EXIT_PASS = 0
EXIT_VALIDATION_FAIL = 1
EXIT_CONFIG_ERROR = 2
EXIT_RUNTIME_ABORT = 3

_CONFIG_KEYS = {
    "rows",
    "cols",
    "users",
    "edge_length_km",
    "q",
    "k",
    "p",
    "tau_e_s",
    "tau_s_s",
    "tau_f_s",
    "c_fibre_km_s",
    "t_coherence_s",
    "trials",
    "master_seed",
    "op_cap",
    "threads",
    "bins",
    "L_values",
}

SWEEP_HEADER = (
    "L_km,p,mean_n_e,mean_n_s,mean_n_f,mean_tau_classical_s,"
    "mean_tau_quantum_s,mean_total_s,classical_share,feasible_frac"
)
TRIALS_HEADER = "trial,n_e,n_s,n_f,tau_classical_s,tau_quantum_s,total_s"
HIST_HEADER = "bin_lo,bin_hi,count"


@dataclasses.dataclass(frozen=True)
class RunManifest:
    """Record of one command run: resolved config and emitted files."""

    tool: str
    version: str
    command: str
    timestamp_utc: str
    master_seed: int
    config: dict
    outputs: list[str]


def _coherence_value(raw):
    if raw is None or raw == "inf":
        return math.inf
    return float(raw)


def load_config(path: str | None) -> dict:
    """Read a JSON config file, rejecting unknown keys."""
    if path is None:
        return {}
    raw = json.loads(Path(path).read_text())
    if not isinstance(raw, dict):
        raise ConfigurationError(f"config root must be a JSON object, got {type(raw).__name__}")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    return raw


def resolve_config(raw: dict, args: argparse.Namespace) -> montecarlo.SimConfig:
    """Apply defaults, then config file values, then flag overrides."""
    device = latency.DeviceParams(
        tau_e_s=float(raw.get("tau_e_s", latency.DEFAULT_TAU_E_S)),
        tau_s_s=float(raw.get("tau_s_s", latency.DEFAULT_TAU_S_S)),
        tau_f_s=float(raw.get("tau_f_s", latency.DEFAULT_TAU_F_S)),
        c_fibre_km_s=float(raw.get("c_fibre_km_s", latency.DEFAULT_C_FIBRE_KM_S)),
        t_coherence_s=_coherence_value(raw.get("t_coherence_s", latency.DEFAULT_T_COHERENCE_S)),
    )
    p_override = raw.get("p")
    q = float(raw.get("q", 0.7))
    k = float(raw.get("k", 0.5))
    if getattr(args, "deterministic", False):
        p_override, q, k = 1.0, 1.0, 1.0
    config = montecarlo.SimConfig(
        rows=int(raw.get("rows", 8)),
        cols=int(raw.get("cols", 8)),
        users=tuple(raw.get("users", ())),
        edge_length_km=float(raw.get("edge_length_km", 2.0)),
        q=q,
        k=k,
        p_override=None if p_override is None else float(p_override),
        device=device,
        trials=int(args.trials if args.trials is not None else raw.get("trials", montecarlo.DEFAULT_TRIALS)),
        master_seed=int(args.seed if args.seed is not None else raw.get("master_seed", montecarlo.DEFAULT_MASTER_SEED)),
        op_cap=int(raw.get("op_cap", 10**9)),
        threads=int(args.threads if args.threads is not None else raw.get("threads", 1)),
        bins=int(args.bins if getattr(args, "bins", None) is not None else raw.get("bins", montecarlo.DEFAULT_BINS)),
    )
    # Force parameter validation up front so bad configs exit 2, not mid-run.
    config.protocol_params
    return config


def resolve_L_values(raw: dict, args: argparse.Namespace) -> list[float]:
    if args.L_start is not None or args.L_end is not None:
        if args.L_start is None or args.L_end is None:
            raise ConfigurationError("--L-start and --L-end must be given together")
        step = args.L_step if args.L_step is not None else 1.0
        if step <= 0:
            raise ConfigurationError(f"--L-step must be positive, got {step}")
        values = []
        current = args.L_start
        while current <= args.L_end + 1e-9:
            values.append(round(current, 12))
            current += step
        return values
    return [float(v) for v in raw.get("L_values", [])]


def _fmt(value: float) -> str:
    """Shortest roundtrip decimal form; locale-independent."""
    return repr(float(value))


def _json_safe(obj):
    if isinstance(obj, float) and math.isinf(obj):
        return "inf"
    if isinstance(obj, dict):
        return {key: _json_safe(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(value) for value in obj]
    return obj


def _write_json(path: Path, payload: dict):
    path.write_text(json.dumps(_json_safe(payload), indent=2, sort_keys=True) + "\n")


def write_validate_json(path: Path, report: montecarlo.ValidationReport):
    payload = {
        "trials": report.trials,
        "mc_mean": dict(report.mc_mean, total_ops=sum(report.mc_mean.values())),
        "mc_stderr": report.mc_stderr,
        "analytic": dict(report.analytic, total_ops=sum(report.analytic.values())),
        "z": report.z,
        "passed": report.passed,
    }
    _write_json(path, payload)


def write_trials_csv(path: Path, results: list[montecarlo.TrialResult]):
    lines = [TRIALS_HEADER]
    for r in results:
        lines.append(
            f"{r.trial},{r.counts.n_e},{r.counts.n_s},{r.counts.n_f},"
            f"{_fmt(r.latency.tau_classical_s)},{_fmt(r.latency.tau_quantum_s)},"
            f"{_fmt(r.latency.total_s)}"
        )
    path.write_text("\n".join(lines) + "\n")


def write_hist_csv(path: Path, summary: montecarlo.Summary):
    lines = [HIST_HEADER]
    for i, count in enumerate(summary.hist_counts):
        lo = summary.hist_bin_edges[i]
        hi = summary.hist_bin_edges[i + 1]
        lines.append(f"{_fmt(lo)},{_fmt(hi)},{int(count)}")
    path.write_text("\n".join(lines) + "\n")


def write_sweep_csv(path: Path, points: list[montecarlo.SweepPoint]):
    lines = [SWEEP_HEADER]
    for pt in points:
        lines.append(
            f"{_fmt(pt.L_km)},{_fmt(pt.p)},{_fmt(pt.mean_n_e)},{_fmt(pt.mean_n_s)},"
            f"{_fmt(pt.mean_n_f)},{_fmt(pt.mean_tau_classical_s)},"
            f"{_fmt(pt.mean_tau_quantum_s)},{_fmt(pt.mean_total_s)},"
            f"{_fmt(pt.classical_share)},{_fmt(pt.feasible_frac)}"
        )
    path.write_text("\n".join(lines) + "\n")


def write_manifest(out_dir: Path, command: str, config: montecarlo.SimConfig, outputs: list[str]):
    manifest = RunManifest(
        tool="medsim",
        version=__version__,
        command=command,
        timestamp_utc=datetime.now(timezone.utc).isoformat(),
        master_seed=config.master_seed,
        config=dataclasses.asdict(config),
        outputs=outputs,
    )
    _write_json(out_dir / f"{command}_manifest.json", dataclasses.asdict(manifest))


def cmd_validate(args) -> int:
    config = resolve_config(load_config(args.config), args)
    report = montecarlo.validate(config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_validate_json(out_dir / "validate.json", report)
    write_manifest(out_dir, "validate", config, ["validate.json"])
    for key in ("n_e", "n_s", "n_f"):
        print(
            f"{key}: mc={report.mc_mean[key]:.6g} analytic={report.analytic[key]:.6g} "
            f"z={report.z[key]:+.3f}"
        )
    print("validation:", "PASS" if report.passed else "FAIL")
    return EXIT_PASS if report.passed else EXIT_VALIDATION_FAIL


def cmd_sweep(args) -> int:
    raw = load_config(args.config)
    config = resolve_config(raw, args)
    L_values = resolve_L_values(raw, args)
    points = montecarlo.sweep(config, L_values)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(out_dir / "sweep.csv", points)
    write_manifest(out_dir, "sweep", config, ["sweep.csv"])
    print(f"sweep: {len(points)} points -> {out_dir / 'sweep.csv'}")
    return EXIT_PASS


def cmd_hist(args) -> int:
    config = resolve_config(load_config(args.config), args)
    _, plan = montecarlo.plan_topology(config)
    results = montecarlo.run_trials(config, plan)
    summary = montecarlo.summarize(results, bins=config.bins)
    expected = markov.expected_protocol_ops(plan.segment_counts, config.protocol_params)
    report = montecarlo.z_scores(summary, expected)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_trials_csv(out_dir / "trials.csv", results)
    write_hist_csv(out_dir / "hist.csv", summary)
    write_validate_json(out_dir / "validate.json", report)
    write_manifest(out_dir, "hist", config, ["trials.csv", "hist.csv", "validate.json"])
    print(f"hist: {config.trials} trials -> {out_dir}")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="medsim",
        description="Monte Carlo simulator for multipartite entanglement distribution latency",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, handler, help_text in (
        ("validate", cmd_validate, "compare Monte Carlo means against the analytical chain"),
        ("sweep", cmd_sweep, "latency decomposition over a range of link lengths"),
        ("hist", cmd_hist, "per-trial records and total-operations histogram"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--config", help="JSON config file (every key optional)")
        p.add_argument("--seed", type=int, default=None, help="master seed override")
        p.add_argument("--trials", type=int, default=None, help="trial count override")
        p.add_argument("--threads", type=int, default=None, help="worker thread count")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument(
            "--deterministic",
            action="store_true",
            help="force p = q = k = 1 (every operation succeeds)",
        )
        if name in ("validate", "hist"):
            p.add_argument("--bins", type=int, default=None, help="histogram bin count")
        if name == "sweep":
            p.add_argument("--L-start", dest="L_start", type=float, default=None)
            p.add_argument("--L-end", dest="L_end", type=float, default=None)
            p.add_argument("--L-step", dest="L_step", type=float, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigurationError, ParameterError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except OpCapExceededError as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_RUNTIME_ABORT


if __name__ == "__main__":
    sys.exit(main())
