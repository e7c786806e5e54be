"""Classical/quantum latency decomposition of operation counts.

Worst-case accounting: every generation attempt is charged one classical
round trip to the farthest user, 2(V-1)L/c', and every swap attempt one
round trip to the farthest repeater, 2(V-2)L/c', where V is the largest
vertex count over the routes. Quantum latency charges each attempt its
operation time, plus one link of photon propagation per generation attempt.
Fusion is local to the central node and contributes no classical distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigurationError, ParameterError
from .protocol import OpCounts
from .topology import RoutePlan

# Generation/swap times from trapped-ion repeater experiments, fusion from
# three 100 us two-qubit gates; c' is light speed in fibre (index ~1.5).
DEFAULT_TAU_E_S = 123e-6
DEFAULT_TAU_S_S = 2157e-6
DEFAULT_TAU_F_S = 300e-6
DEFAULT_C_FIBRE_KM_S = 2.0e5
DEFAULT_T_COHERENCE_S = 4.0


@dataclass(frozen=True)
class DeviceParams:
    """Operation times, fibre light speed, and the memory coherence time."""

    tau_e_s: float = DEFAULT_TAU_E_S
    tau_s_s: float = DEFAULT_TAU_S_S
    tau_f_s: float = DEFAULT_TAU_F_S
    c_fibre_km_s: float = DEFAULT_C_FIBRE_KM_S
    t_coherence_s: float = DEFAULT_T_COHERENCE_S

    def __post_init__(self):
        for name, value in (
            ("tau_e_s", self.tau_e_s),
            ("tau_s_s", self.tau_s_s),
            ("tau_f_s", self.tau_f_s),
            ("c_fibre_km_s", self.c_fibre_km_s),
            ("t_coherence_s", self.t_coherence_s),
        ):
            if not value > 0:
                raise ParameterError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class LatencyBreakdown:
    """Split of one run's latency into classical and quantum parts."""

    tau_classical_s: float
    tau_quantum_s: float

    @property
    def total_s(self) -> float:
        return self.tau_classical_s + self.tau_quantum_s

    @property
    def classical_share(self) -> float:
        total = self.total_s
        if total == 0.0:
            return 0.0
        return self.tau_classical_s / total


def success_prob(edge_length_km: float) -> float:
    """Generation success probability 0.018 * 10^(-0.2 L / 10)."""
    if edge_length_km < 0:
        raise ParameterError(f"edge length must be >= 0, got {edge_length_km}")
    return 0.018 * 10.0 ** (-0.02 * edge_length_km)


def classical_latency(
    counts: OpCounts, v_max: int, edge_length_km: float, c_fibre_km_s: float
) -> float:
    """Total classical signalling time for the given attempt counts."""
    if v_max < 2:
        raise ConfigurationError(f"v_max must be >= 2, got {v_max}")
    per_generation = 2.0 * (v_max - 1) * edge_length_km / c_fibre_km_s
    per_swap = 2.0 * (v_max - 2) * edge_length_km / c_fibre_km_s
    return counts.n_e * per_generation + counts.n_s * per_swap


def quantum_latency(counts: OpCounts, edge_length_km: float, device: DeviceParams) -> float:
    """Total quantum operation time, including photon propagation."""
    per_generation = device.tau_e_s + edge_length_km / device.c_fibre_km_s
    return (
        counts.n_e * per_generation
        + counts.n_s * device.tau_s_s
        + counts.n_f * device.tau_f_s
    )


def breakdown(counts: OpCounts, plan: RoutePlan, device: DeviceParams) -> LatencyBreakdown:
    """Latency decomposition of one run on the given route plan."""
    return LatencyBreakdown(
        tau_classical_s=classical_latency(
            counts, plan.v_max, plan.edge_length_km, device.c_fibre_km_s
        ),
        tau_quantum_s=quantum_latency(counts, plan.edge_length_km, device),
    )


def feasibility(latency: LatencyBreakdown, t_coherence_s: float) -> bool:
    """True when the run completes within the coherence time."""
    return math.isinf(t_coherence_s) or latency.total_s <= t_coherence_s
