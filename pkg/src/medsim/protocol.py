"""Three-stage entanglement distribution protocol as a counting state machine.

Per route the state is the length of the contiguous prefix of segments,
starting at the central node, covered by one entangled pair. A step
generates the elementary pair on the next segment (every attempt counted
into n_e) and, beyond the first segment, attempts one swap: success extends
the prefix, failure destroys it and the route restarts. Once every route
holds a full-length pair the central node attempts fusion; fusion failure
restarts all routes. No quantum state is tracked, only operation counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import OpCapExceededError, ParameterError

DEFAULT_OP_CAP = 10**9


@dataclass(frozen=True)
class ProtocolParams:
    """Success probabilities: p (generation), q (swap), k (fusion)."""

    p: float
    q: float
    k: float

    def __post_init__(self):
        for name, value in (("p", self.p), ("q", self.q), ("k", self.k)):
            if not 0.0 < value <= 1.0:
                raise ParameterError(
                    f"{name} must be in (0, 1], got {value} (0 never terminates)"
                )


@dataclass(frozen=True)
class RouteState:
    """Number of consecutive segments from the CN covered by one pair."""

    prefix_len: int = 0


@dataclass(frozen=True)
class OpCounts:
    """Attempt totals for generation, swapping, and fusion."""

    n_e: int
    n_s: int
    n_f: int

    def __post_init__(self):
        if self.n_e < 0 or self.n_s < 0 or self.n_f < 0:
            raise ParameterError(f"operation counts must be non-negative, got {self}")

    @property
    def total(self) -> int:
        return self.n_e + self.n_s + self.n_f


def _kernel_family(rng):
    """Jitted kernels for numpy Generators, uncompiled ones otherwise.

    Any object with a ``random() -> float in [0, 1)`` method works on the
    uncompiled path, which is how tests script forced outcomes.
    """
    if isinstance(rng, np.random.Generator):
        return _kernels.route_step, _kernels.route_counts, _kernels.protocol_counts
    return _kernels.py_route_step, _kernels.py_route_counts, _kernels.py_protocol_counts


def advance_route(
    state: RouteState, num_segments: int, params: ProtocolParams, rng
) -> tuple[RouteState, OpCounts]:
    """Perform one protocol step on a route; returns new state and deltas."""
    if not 0 <= state.prefix_len < num_segments:
        raise ValueError(
            f"advance_route needs 0 <= prefix_len < num_segments, got "
            f"prefix_len={state.prefix_len} with num_segments={num_segments}"
        )
    step, _, _ = _kernel_family(rng)
    prefix_len, d_ne, d_ns = step(state.prefix_len, _kernels.log1m(params.p), params.q, rng)
    return RouteState(prefix_len), OpCounts(d_ne, d_ns, 0)


def simulate_route(
    num_segments: int, params: ProtocolParams, rng, op_cap: int = DEFAULT_OP_CAP
) -> OpCounts:
    """Run one route from an empty prefix to completion; n_f stays 0."""
    if num_segments < 1:
        raise ParameterError(f"num_segments must be >= 1, got {num_segments}")
    _, counts, _ = _kernel_family(rng)
    n_e, n_s = counts(num_segments, _kernels.log1m(params.p), params.q, op_cap, rng)
    if n_e < 0:
        raise OpCapExceededError(
            f"route of {num_segments} segments exceeded the operation cap {op_cap}"
        )
    return OpCounts(n_e, n_s, 0)


def run_protocol(
    route_segment_counts, params: ProtocolParams, rng, op_cap: int = DEFAULT_OP_CAP
) -> OpCounts:
    """Run the full protocol until a fusion succeeds; returns total counts."""
    segments = np.asarray(route_segment_counts, dtype=np.int64)
    if segments.size == 0:
        raise ParameterError("route_segment_counts must not be empty")
    if segments.min() < 1:
        raise ParameterError(
            f"every route needs at least one segment, got {route_segment_counts}"
        )
    _, _, protocol = _kernel_family(rng)
    n_e, n_s, n_f = protocol(
        segments, _kernels.log1m(params.p), params.q, params.k, op_cap, rng
    )
    if n_e < 0:
        raise OpCapExceededError(
            f"protocol run exceeded the operation cap {op_cap} "
            f"(routes {list(segments)}, p={params.p}, q={params.q}, k={params.k})"
        )
    return OpCounts(int(n_e), int(n_s), int(n_f))
