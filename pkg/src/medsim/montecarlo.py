"""Trial execution, summary statistics, link-length sweeps, and validation.

Each trial runs the full protocol on its own random substream, derived from
(master_seed, trial index) through numpy's SeedSequence hash-mix. Results
are therefore bit-identical for identical configs regardless of execution
order or thread count, and trials can run concurrently (the jitted kernels
release the GIL).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import latency, markov, protocol, topology
from .errors import ConfigurationError, OpCapExceededError

DEFAULT_TRIALS = 10_000
DEFAULT_MASTER_SEED = 20_123
DEFAULT_BINS = 50

Z_THRESHOLD = 4.0


def corner_users(rows: int, cols: int) -> tuple[int, ...]:
    """The four corner node ids of a rows x cols grid."""
    return (0, cols - 1, (rows - 1) * cols, rows * cols - 1)


@dataclass(frozen=True)
class SimConfig:
    """Everything needed to reproduce one batch of trials."""

    rows: int = 8
    cols: int = 8
    users: tuple[int, ...] = ()
    edge_length_km: float = 2.0
    q: float = 0.7
    k: float = 0.5
    p_override: float | None = None
    device: latency.DeviceParams = field(default_factory=latency.DeviceParams)
    trials: int = DEFAULT_TRIALS
    master_seed: int = DEFAULT_MASTER_SEED
    op_cap: int = protocol.DEFAULT_OP_CAP
    threads: int = 1
    bins: int = DEFAULT_BINS

    def __post_init__(self):
        if not self.users:
            object.__setattr__(self, "users", corner_users(self.rows, self.cols))
        if len(self.users) < 2:
            raise ConfigurationError(f"need at least 2 users, got {list(self.users)}")
        if self.trials < 1:
            raise ConfigurationError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigurationError(
                f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}"
            )
        if self.threads < 1:
            raise ConfigurationError(f"threads must be >= 1, got {self.threads}")
        if self.bins < 1:
            raise ConfigurationError(f"bins must be >= 1, got {self.bins}")

    @property
    def p(self) -> float:
        """Generation success probability: derived from L unless overridden."""
        if self.p_override is not None:
            return self.p_override
        return latency.success_prob(self.edge_length_km)

    @property
    def protocol_params(self) -> protocol.ProtocolParams:
        return protocol.ProtocolParams(p=self.p, q=self.q, k=self.k)


@dataclass(frozen=True)
class TrialResult:
    trial: int
    counts: protocol.OpCounts
    latency: latency.LatencyBreakdown


@dataclass(frozen=True)
class QuantityStats:
    mean: float
    std: float
    stderr: float


@dataclass(frozen=True)
class Summary:
    """Per-quantity statistics plus the total-operations histogram."""

    trials: int
    n_e: QuantityStats
    n_s: QuantityStats
    n_f: QuantityStats
    total_ops: QuantityStats
    tau_classical_s: QuantityStats
    tau_quantum_s: QuantityStats
    total_s: QuantityStats
    hist_bin_edges: np.ndarray
    hist_counts: np.ndarray


@dataclass(frozen=True)
class SweepPoint:
    """Mean quantities at one link length. share_stderr is a delta-method
    standard error for classical_share, used by trend tests only."""

    L_km: float
    p: float
    mean_n_e: float
    mean_n_s: float
    mean_n_f: float
    mean_tau_classical_s: float
    mean_tau_quantum_s: float
    mean_total_s: float
    classical_share: float
    feasible_frac: float
    share_stderr: float


@dataclass(frozen=True)
class ValidationReport:
    """Monte Carlo means against the analytical chain, with z-scores."""

    trials: int
    mc_mean: dict[str, float]
    mc_stderr: dict[str, float]
    analytic: dict[str, float]
    z: dict[str, float]
    passed: bool


def plan_topology(config: SimConfig) -> tuple[topology.GridTopology, topology.RoutePlan]:
    """Build the grid, pick the central node, and plan all routes."""
    topo = topology.build_grid(config.rows, config.cols, config.edge_length_km)
    cn = topology.select_central_node(topo, config.users)
    plan = topology.compute_routes(topo, cn, config.users)
    return topo, plan


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    """Independent substream for one trial, from a (seed, index) hash-mix."""
    return np.random.default_rng(np.random.SeedSequence([master_seed, trial_index]))


def run_trials(config: SimConfig, plan: topology.RoutePlan | None = None) -> list[TrialResult]:
    """Run all configured trials; deterministic for identical configs."""
    if plan is None:
        _, plan = plan_topology(config)
    segments = plan.segment_counts
    params = config.protocol_params

    def one_trial(index: int) -> protocol.OpCounts:
        rng = trial_rng(config.master_seed, index)
        try:
            return protocol.run_protocol(segments, params, rng, config.op_cap)
        except OpCapExceededError as exc:
            raise OpCapExceededError(f"trial {index}: {exc}") from exc

    if config.threads == 1:
        counts = [one_trial(i) for i in range(config.trials)]
    else:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            counts = list(pool.map(one_trial, range(config.trials)))

    return [
        TrialResult(trial=i, counts=c, latency=latency.breakdown(c, plan, config.device))
        for i, c in enumerate(counts)
    ]


def _stats(values: np.ndarray) -> QuantityStats:
    n = values.size
    std = float(values.std(ddof=1)) if n > 1 else 0.0
    return QuantityStats(mean=float(values.mean()), std=std, stderr=std / math.sqrt(n))


def summarize(results: Sequence[TrialResult], bins: int = DEFAULT_BINS) -> Summary:
    """Means, standard deviations, standard errors, and the ops histogram."""
    if not results:
        raise ConfigurationError("cannot summarize an empty result list")
    n_e = np.array([r.counts.n_e for r in results], dtype=np.float64)
    n_s = np.array([r.counts.n_s for r in results], dtype=np.float64)
    n_f = np.array([r.counts.n_f for r in results], dtype=np.float64)
    tau_c = np.array([r.latency.tau_classical_s for r in results])
    tau_q = np.array([r.latency.tau_quantum_s for r in results])
    total_ops = n_e + n_s + n_f
    # np.histogram spans observed min..max; for a degenerate span it widens
    # by +-0.5, which still leaves exactly one occupied bin.
    hist_counts, hist_edges = np.histogram(total_ops, bins=bins)
    return Summary(
        trials=len(results),
        n_e=_stats(n_e),
        n_s=_stats(n_s),
        n_f=_stats(n_f),
        total_ops=_stats(total_ops),
        tau_classical_s=_stats(tau_c),
        tau_quantum_s=_stats(tau_q),
        total_s=_stats(tau_c + tau_q),
        hist_bin_edges=hist_edges,
        hist_counts=hist_counts,
    )


def _share_of_means(mean_c: float, mean_q: float) -> float:
    total = mean_c + mean_q
    if total == 0.0:
        return 0.0
    return mean_c / total


def _share_stderr(tau_c: np.ndarray, tau_q: np.ndarray) -> float:
    """Delta-method standard error of mean_c / (mean_c + mean_q).

    tau_c and tau_q are strongly correlated across trials (both scale with
    the counts), so the covariance term matters.
    """
    n = tau_c.size
    if n < 2:
        return 0.0
    mc = tau_c.mean()
    mq = tau_q.mean()
    total = mc + mq
    if total == 0.0:
        return 0.0
    cov = np.cov(tau_c, tau_q, ddof=1)
    var_share = (
        mq * mq * cov[0, 0] + mc * mc * cov[1, 1] - 2.0 * mc * mq * cov[0, 1]
    ) / total**4
    return math.sqrt(max(var_share, 0.0) / n)


def sweep(config: SimConfig, L_values: Sequence[float]) -> list[SweepPoint]:
    """Run the trial batch at each link length, ascending."""
    L_values = [float(L) for L in L_values]
    if not L_values:
        raise ConfigurationError("sweep needs at least one link length")
    if any(L <= 0 for L in L_values):
        raise ConfigurationError(f"link lengths must be positive, got {L_values}")
    if sorted(L_values) != L_values:
        raise ConfigurationError(f"link lengths must be sorted ascending, got {L_values}")

    points = []
    for L in L_values:
        point_config = replace(config, edge_length_km=L)
        _, plan = plan_topology(point_config)
        results = run_trials(point_config, plan)
        tau_c = np.array([r.latency.tau_classical_s for r in results])
        tau_q = np.array([r.latency.tau_quantum_s for r in results])
        totals = tau_c + tau_q
        feasible = totals <= point_config.device.t_coherence_s
        points.append(
            SweepPoint(
                L_km=L,
                p=point_config.p,
                mean_n_e=float(np.mean([r.counts.n_e for r in results])),
                mean_n_s=float(np.mean([r.counts.n_s for r in results])),
                mean_n_f=float(np.mean([r.counts.n_f for r in results])),
                mean_tau_classical_s=float(tau_c.mean()),
                mean_tau_quantum_s=float(tau_q.mean()),
                mean_total_s=float(totals.mean()),
                classical_share=_share_of_means(float(tau_c.mean()), float(tau_q.mean())),
                feasible_frac=float(feasible.mean()),
                share_stderr=_share_stderr(tau_c, tau_q),
            )
        )
    return points


def z_scores(summary: Summary, expected: markov.ExpectedOps) -> ValidationReport:
    """Compare Monte Carlo means against analytical expectations.

    A zero standard error degenerates to an exact-equality check: z is 0 on
    equality and infinite otherwise.
    """
    mc_mean = {
        "n_e": summary.n_e.mean,
        "n_s": summary.n_s.mean,
        "n_f": summary.n_f.mean,
    }
    mc_stderr = {
        "n_e": summary.n_e.stderr,
        "n_s": summary.n_s.stderr,
        "n_f": summary.n_f.stderr,
    }
    analytic = {"n_e": expected.e_ne, "n_s": expected.e_ns, "n_f": expected.e_nf}
    z = {}
    for key in mc_mean:
        if mc_stderr[key] == 0.0:
            z[key] = 0.0 if mc_mean[key] == analytic[key] else math.inf
        else:
            z[key] = (mc_mean[key] - analytic[key]) / mc_stderr[key]
    passed = all(abs(v) < Z_THRESHOLD for v in z.values())
    return ValidationReport(
        trials=summary.trials,
        mc_mean=mc_mean,
        mc_stderr=mc_stderr,
        analytic=analytic,
        z=z,
        passed=passed,
    )


def validate(config: SimConfig) -> ValidationReport:
    """Run the trials and score them against the analytical chain."""
    _, plan = plan_topology(config)
    results = run_trials(config, plan)
    summary = summarize(results, bins=config.bins)
    expected = markov.expected_protocol_ops(plan.segment_counts, config.protocol_params)
    return z_scores(summary, expected)
