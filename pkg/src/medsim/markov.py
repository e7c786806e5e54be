"""Expected operation counts from the absorbing-chain view of the protocol.

The per-route chain has states 0..m (prefix length) with absorption at m.
Writing N(i) for the expected remaining cost from state i, the generation
count satisfies N_e(m) = 0, N_e(0) = 1/p + N_e(1), and for 0 < i < m
N_e(i) = 1/p + q N_e(i+1) + (1-q) N_e(0); the swap count N_s obeys the same
recursion with per-visit cost 1, zero cost at state 0. Treating N(0) as the
unknown makes the system triangular, so it is solved by one backward sweep
expressing each N(i) as a_i + b_i N(0); no matrix inversion is needed.

Fusion rounds are geometric with success probability k and the per-round
route costs are i.i.d., so whole-protocol expectations are the per-round
sums scaled by the expected number of rounds 1/k (Wald's identity).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError
from .protocol import ProtocolParams


@dataclass(frozen=True)
class ExpectedOps:
    """Expected attempt totals for one full protocol run."""

    e_ne: float
    e_ns: float
    e_nf: float


def _check_route_args(num_segments: int, p: float, q: float):
    if num_segments < 1:
        raise ParameterError(f"num_segments must be >= 1, got {num_segments}")
    for name, value in (("p", p), ("q", q)):
        if not 0.0 < value <= 1.0:
            raise ParameterError(f"{name} must be in (0, 1], got {value}")


def expected_route_ops(num_segments: int, p: float, q: float) -> tuple[float, float]:
    """Expected (n_e, n_s) to complete one route of num_segments segments."""
    _check_route_args(num_segments, p, q)
    gen_cost = 1.0 / p
    # Backward sweep over states m-1 .. 1: N(i) = a + b * N(0).
    a_e = b_e = 0.0
    a_s = b_s = 0.0
    for _ in range(num_segments - 1):
        a_e = gen_cost + q * a_e
        b_e = q * b_e + (1.0 - q)
        a_s = 1.0 + q * a_s
        b_s = q * b_s + (1.0 - q)
    # State 0 closes the system: N_e(0) = 1/p + N_e(1), N_s(0) = N_s(1).
    e_route_ne = (gen_cost + a_e) / (1.0 - b_e)
    e_route_ns = a_s / (1.0 - b_s)
    return e_route_ne, e_route_ns


def expected_protocol_ops(route_segment_counts, params: ProtocolParams) -> ExpectedOps:
    """Expected totals for the full protocol over the given routes."""
    counts = list(route_segment_counts)
    if not counts:
        raise ParameterError("route_segment_counts must not be empty")
    sum_ne = 0.0
    sum_ns = 0.0
    for m in counts:
        e_ne, e_ns = expected_route_ops(int(m), params.p, params.q)
        sum_ne += e_ne
        sum_ns += e_ns
    rounds = 1.0 / params.k
    return ExpectedOps(e_ne=rounds * sum_ne, e_ns=rounds * sum_ns, e_nf=rounds)
