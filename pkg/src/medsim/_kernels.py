"""Hot-loop kernels for the stochastic protocol, jitted with numba.

The same source is used for both backends: `build_kernels` is called once
with `numba.njit` and once with a no-op decorator, and the module-level
names point at the jitted family unless the MEDSIM_NO_NUMBA environment
variable disables it (or numba is unavailable). Both families consume the
same numpy Generator stream draw by draw, so their results are
bit-identical; the `py_*` names always refer to the uncompiled family.

The kernels take `log1m_p = log1p(-p)` instead of p so the geometric
inverse-CDF transform needs no special case: for p = 1 the caller passes
-inf and the attempt count is always 1. Use `log1m` to convert.

All kernels return counts as plain integers; a negative n_e signals that
the operation cap was exceeded (numba cannot raise rich exceptions cheaply,
so wrappers in `protocol` translate the sentinel into OpCapExceededError).
"""

from __future__ import annotations

import math
import os

NO_NUMBA_ENV = "MEDSIM_NO_NUMBA"


def numba_requested() -> bool:
    """True unless the env flag selects the pure fallback."""
    return os.environ.get(NO_NUMBA_ENV, "").strip().lower() not in {"1", "true", "yes", "on"}


def log1m(p: float) -> float:
    """log(1 - p), with the p = 1 endpoint mapped to -inf."""
    if p >= 1.0:
        return -math.inf
    return math.log1p(-p)


def build_kernels(jit):
    """Build the kernel family under the given decorator.

    Returns (generation_attempts, route_step, route_counts,
    route_counts_batch, protocol_counts).
    """

    @jit
    def generation_attempts(log1m_p, rng):
        # Number of Bernoulli(p) attempts until the first success, sampled
        # in one draw via the geometric inverse CDF. u < 1 strictly, so the
        # ratio is finite (0 when log1m_p = -inf, i.e. p = 1).
        u = rng.random()
        return 1 + int(math.log1p(-u) / log1m_p)

    @jit
    def route_step(prefix_len, log1m_p, q, rng):
        # One protocol step under the sequential-swap policy: generate the
        # elementary pair on the next segment, then extend the prefix by a
        # swap (except from 0, where the fresh pair is the prefix). Swap
        # failure destroys the whole prefix.
        ne = generation_attempts(log1m_p, rng)
        if prefix_len == 0:
            return 1, ne, 0
        if rng.random() < q:
            return prefix_len + 1, ne, 1
        return 0, ne, 1

    @jit
    def route_counts(num_segments, log1m_p, q, budget, rng):
        # Drive one route from an empty prefix to a full-length pair.
        # Returns (n_e, n_s), or (-1, -1) once n_e + n_s exceeds budget.
        ne = 0
        ns = 0
        prefix_len = 0
        while prefix_len < num_segments:
            prefix_len, d_ne, d_ns = route_step(prefix_len, log1m_p, q, rng)
            ne += d_ne
            ns += d_ns
            if ne + ns > budget:
                return -1, -1
        return ne, ns

    @jit
    def route_counts_batch(num_segments, log1m_p, q, budget, n_trials, rng, out_ne, out_ns):
        # Many independent route completions from one stream; used by the
        # statistical tests against the analytical chain.
        for i in range(n_trials):
            ne, ns = route_counts(num_segments, log1m_p, q, budget, rng)
            out_ne[i] = ne
            out_ns[i] = ns
            if ne < 0:
                return i
        return n_trials

    @jit
    def protocol_counts(segment_counts, log1m_p, q, k, op_cap, rng):
        # Full protocol run: complete every route, then one fusion attempt;
        # fusion failure resets all routes. Returns (n_e, n_s, n_f), or
        # (-1, -1, -1) if the per-trial operation cap is exceeded.
        ne = 0
        ns = 0
        nf = 0
        while True:
            for r in range(segment_counts.shape[0]):
                d_ne, d_ns = route_counts(
                    segment_counts[r], log1m_p, q, op_cap - ne - ns - nf, rng
                )
                if d_ne < 0:
                    return -1, -1, -1
                ne += d_ne
                ns += d_ns
            nf += 1
            if ne + ns + nf > op_cap:
                return -1, -1, -1
            if rng.random() < k:
                return ne, ns, nf

    return (
        generation_attempts,
        route_step,
        route_counts,
        route_counts_batch,
        protocol_counts,
    )


(
    py_generation_attempts,
    py_route_step,
    py_route_counts,
    py_route_counts_batch,
    py_protocol_counts,
) = build_kernels(lambda f: f)

try:
    if not numba_requested():
        raise ImportError("numba disabled via " + NO_NUMBA_ENV)
    import numba

    _njit = numba.njit(cache=True, nogil=True)
    NUMBA_ENABLED = True
except ImportError:
    NUMBA_ENABLED = False

if NUMBA_ENABLED:
    (
        generation_attempts,
        route_step,
        route_counts,
        route_counts_batch,
        protocol_counts,
    ) = build_kernels(_njit)
else:
    generation_attempts = py_generation_attempts
    route_step = py_route_step
    route_counts = py_route_counts
    route_counts_batch = py_route_counts_batch
    protocol_counts = py_protocol_counts


def backend() -> str:
    """Active kernel backend, 'numba' or 'pure'."""
    return "numba" if NUMBA_ENABLED else "pure"
