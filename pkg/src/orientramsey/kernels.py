"""Hot search kernels: DPLL orientation search and exhaustive orientation scan.

Both kernels operate on flat numpy arrays describing "forbidden patterns":
a pattern is one concrete orientation assignment of an edge subset whose
realization would create a copy of the target digraph.  An orientation is
pattern-free iff it avoids every pattern, so deciding the arrow relation is
a SAT question over boolean edge-direction variables with one blocking
clause per pattern.

The implementations are written in nopython style.  When numba is
installed and the environment variable ORIENTRAMSEY_NO_JIT is unset, the
module compiles them with @njit at import time; otherwise the plain-Python
versions run as-is and the exhaustive scan falls back to a vectorized
numpy path.  `benchmarks/kernel_bench.py` times the two paths against each
other.
"""

from __future__ import annotations

import os

import numpy as np

JIT_ENV_FLAG = "ORIENTRAMSEY_NO_JIT"

try:
    import numba
except ImportError:
    numba = None


def jit_requested():
    return os.environ.get(JIT_ENV_FLAG, "").lower() not in ("1", "true", "yes")


def jit_enabled():
    """True when the module-level kernels are the numba-compiled ones."""
    return _JIT_ACTIVE


# status codes returned by the DPLL kernel
SAT = 1          # a pattern-free orientation exists (assignment returned)
UNSAT = 0        # every orientation realizes some pattern
OUT_OF_BUDGET = -1


def dpll_orientation_search(n_edges, pat_ptr, pat_edge, pat_bit,
                            inc_ptr, inc_pat, inc_bit, node_budget):
    """Search for an edge orientation avoiding every forbidden pattern.

    Patterns are given in CSR form (pat_ptr/pat_edge/pat_bit); the
    edge-to-pattern incidence (inc_ptr/inc_pat/inc_bit) mirrors them.
    Unit propagation: a pattern with all-but-one edge assigned and
    matching forces the last edge to the opposite direction; a fully
    matched pattern is a conflict.  Decisions pick the unassigned edge
    with the highest near-completion score, value 0 first, and backtrack
    chronologically.  Everything is integer arithmetic in fixed order, so
    results are deterministic and identical under JIT and fallback.

    Returns (status, assignment, nodes): assignment is int8 per edge with
    0 = low->high, 1 = high->low (meaningful when status == SAT).
    """
    n_pat = pat_ptr.shape[0] - 1
    assign = np.full(n_edges, -1, np.int8)
    unassigned = np.empty(n_pat, np.int32)
    mismatch = np.zeros(n_pat, np.int32)
    for p in range(n_pat):
        unassigned[p] = pat_ptr[p + 1] - pat_ptr[p]
    trail = np.empty(n_edges + 1, np.int32)
    trail_len = 0
    dec_edge = np.empty(n_edges + 1, np.int32)
    dec_val = np.empty(n_edges + 1, np.int8)
    dec_flipped = np.empty(n_edges + 1, np.uint8)
    dec_trail = np.empty(n_edges + 2, np.int32)
    n_dec = 0
    queue = np.empty(n_pat + n_edges + 8, np.int64)
    q_len = 0
    score = np.zeros(n_edges, np.int64)
    nodes = 0

    # width-1 patterns are units from the start
    for p in range(n_pat):
        if unassigned[p] == 1:
            t = pat_ptr[p]
            queue[q_len] = (np.int64(pat_edge[t]) << 1) | (1 - pat_bit[t])
            q_len += 1

    while True:
        # unit propagation to fixpoint
        conflict = False
        qi = 0
        while qi < q_len:
            lit = queue[qi]
            qi += 1
            e = np.int32(lit >> 1)
            v = np.int8(lit & 1)
            if assign[e] == v:
                continue
            if assign[e] == 1 - v:
                conflict = True
                break
            assign[e] = v
            trail[trail_len] = e
            trail_len += 1
            # every incidence of e must be counted even after a conflict,
            # or the backtracking undo would corrupt the counters
            for k in range(inc_ptr[e], inc_ptr[e + 1]):
                p = inc_pat[k]
                unassigned[p] -= 1
                if v != inc_bit[k]:
                    mismatch[p] += 1
                elif mismatch[p] == 0:
                    if unassigned[p] == 0:
                        conflict = True
                    elif unassigned[p] == 1:
                        for t in range(pat_ptr[p], pat_ptr[p + 1]):
                            e2 = pat_edge[t]
                            if assign[e2] < 0:
                                queue[q_len] = (np.int64(e2) << 1) | (1 - pat_bit[t])
                                q_len += 1
                                break
            if conflict:
                break
        q_len = 0

        if conflict:
            while True:
                if n_dec == 0:
                    return UNSAT, assign, nodes
                target = dec_trail[n_dec - 1]
                while trail_len > target:
                    trail_len -= 1
                    e = trail[trail_len]
                    v = assign[e]
                    assign[e] = -1
                    for k in range(inc_ptr[e], inc_ptr[e + 1]):
                        p = inc_pat[k]
                        unassigned[p] += 1
                        if v != inc_bit[k]:
                            mismatch[p] -= 1
                if dec_flipped[n_dec - 1] == 0:
                    dec_flipped[n_dec - 1] = 1
                    v2 = 1 - dec_val[n_dec - 1]
                    dec_val[n_dec - 1] = v2
                    nodes += 1
                    if nodes > node_budget:
                        return OUT_OF_BUDGET, assign, nodes
                    queue[0] = (np.int64(dec_edge[n_dec - 1]) << 1) | v2
                    q_len = 1
                    break
                n_dec -= 1
            continue

        if trail_len == n_edges:
            return SAT, assign, nodes

        # decision: most-constrained unassigned edge (near-complete alive
        # patterns weigh exponentially more)
        for e in range(n_edges):
            score[e] = 0
        for p in range(n_pat):
            if mismatch[p] == 0:
                u = unassigned[p]
                shift = 2 * (12 - u)
                if shift < 0:
                    shift = 0
                if shift > 40:
                    shift = 40
                w = np.int64(1) << shift
                for t in range(pat_ptr[p], pat_ptr[p + 1]):
                    e = pat_edge[t]
                    if assign[e] < 0:
                        score[e] += w
        best = -1
        best_score = np.int64(-1)
        for e in range(n_edges):
            if assign[e] < 0 and score[e] > best_score:
                best = e
                best_score = score[e]
        nodes += 1
        if nodes > node_budget:
            return OUT_OF_BUDGET, assign, nodes
        dec_edge[n_dec] = best
        dec_val[n_dec] = 0
        dec_flipped[n_dec] = 0
        dec_trail[n_dec] = trail_len
        n_dec += 1
        queue[0] = np.int64(best) << 1
        q_len = 1


def exhaustive_scan_loop(n_edges, pat_mask, pat_req):
    """Scan all 2^n_edges orientations; count the pattern-free ones.

    pat_mask/pat_req are per-pattern bit masks: orientation `mask`
    realizes pattern p iff (mask & pat_mask[p]) == pat_req[p].  Returns
    (free_count, first_free_mask) with first_free_mask = -1 if none.
    """
    n_pat = pat_mask.shape[0]
    total = np.int64(1) << n_edges
    count = np.int64(0)
    first_free = np.int64(-1)
    for mask in range(total):
        free = True
        for p in range(n_pat):
            if (mask & pat_mask[p]) == pat_req[p]:
                free = False
                break
        if free:
            count += 1
            if first_free < 0:
                first_free = mask
    return count, first_free


def exhaustive_scan_numpy(n_edges, pat_mask, pat_req):
    """Vectorized fallback for the exhaustive orientation scan."""
    total = 1 << int(n_edges)
    masks = np.arange(total, dtype=np.int64)
    contained = np.zeros(total, dtype=bool)
    for p in range(pat_mask.shape[0]):
        contained |= (masks & pat_mask[p]) == pat_req[p]
    free = np.flatnonzero(~contained)
    if free.size == 0:
        return 0, -1
    return int(free.size), int(free[0])


# Plain-Python handles stay importable for tests and benchmarks.
dpll_python = dpll_orientation_search
exhaustive_scan_python = exhaustive_scan_loop

_JIT_ACTIVE = False
if numba is not None and jit_requested():
    dpll_orientation_search = numba.njit(cache=True)(dpll_python)
    exhaustive_scan = numba.njit(cache=True)(exhaustive_scan_python)
    _JIT_ACTIVE = True
else:
    exhaustive_scan = exhaustive_scan_numpy


def build_jitted_kernels():
    """Compiled kernel pair for benchmarking, regardless of the env flag."""
    if numba is None:
        raise RuntimeError("numba is not installed")
    if _JIT_ACTIVE:
        return dpll_orientation_search, exhaustive_scan
    return (numba.njit(cache=True)(dpll_python),
            numba.njit(cache=True)(exhaustive_scan_python))
