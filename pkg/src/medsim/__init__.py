"""Monte Carlo simulator for single-path multipartite entanglement
distribution on grid networks, validated against an absorbing-chain model,
with a classical/quantum latency decomposition."""

__version__ = "0.1.0"

from ._kernels import NUMBA_ENABLED, backend
from .errors import ConfigurationError, OpCapExceededError, ParameterError
from .latency import (
    DeviceParams,
    LatencyBreakdown,
    breakdown,
    classical_latency,
    feasibility,
    quantum_latency,
    success_prob,
)
from .markov import ExpectedOps, expected_protocol_ops, expected_route_ops
from .montecarlo import (
    SimConfig,
    Summary,
    SweepPoint,
    TrialResult,
    ValidationReport,
    run_trials,
    summarize,
    sweep,
    validate,
)
from .protocol import (
    OpCounts,
    ProtocolParams,
    RouteState,
    advance_route,
    run_protocol,
    simulate_route,
)
from .topology import (
    GridTopology,
    Route,
    RoutePlan,
    build_grid,
    compute_routes,
    select_central_node,
)

__all__ = [
    "NUMBA_ENABLED",
    "backend",
    "ConfigurationError",
    "OpCapExceededError",
    "ParameterError",
    "DeviceParams",
    "LatencyBreakdown",
    "breakdown",
    "classical_latency",
    "feasibility",
    "quantum_latency",
    "success_prob",
    "ExpectedOps",
    "expected_protocol_ops",
    "expected_route_ops",
    "SimConfig",
    "Summary",
    "SweepPoint",
    "TrialResult",
    "ValidationReport",
    "run_trials",
    "summarize",
    "sweep",
    "validate",
    "OpCounts",
    "ProtocolParams",
    "RouteState",
    "advance_route",
    "run_protocol",
    "simulate_route",
    "GridTopology",
    "Route",
    "RoutePlan",
    "build_grid",
    "compute_routes",
    "select_central_node",
]
