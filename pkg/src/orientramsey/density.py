"""Exact rational graph densities with maximizing witnesses.

Both maxima range over all subgraphs, but removing an edge at a fixed
vertex count never increases either ratio, so scanning induced vertex
subsets (plus the small-graph convention cases) reaches the same maximum.
Everything is Fraction arithmetic; threshold exponents are ratios and
float ties would corrupt witness selection.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import TooLargeError
from .graphs import iter_bits

# Densities are for pattern graphs; the subset scan is exponential in v.
MAX_DENSITY_VERTICES = 16


@dataclass(frozen=True)
class DensityReport:
    kind: str              # "m2" or "m"
    value: Fraction
    vertices: tuple
    edges: tuple

    def recompute(self):
        """Density of the witness subgraph from scratch; must equal value."""
        v = len(self.vertices)
        e = len(self.edges)
        if self.kind == "m2":
            return _d2_ratio(v, e)
        return Fraction(e, v)


def _d2_ratio(v, e):
    if v >= 3:
        return Fraction(e - 1, v - 2)
    if v == 1 and e == 0:
        return Fraction(0)
    if v == 2:
        return Fraction(1, 2) if e == 1 else Fraction(0)
    return None


def d2(h):
    """(e-1)/(v-2) for v >= 3; 0 for K1 and 2K1; 1/2 for K2; undefined
    for anything else on fewer than 3 vertices."""
    value = _d2_ratio(h.n, h.e)
    if value is None:
        raise ValueError(f"2-density undefined for v={h.n}, e={h.e}")
    return value


def _induced_edge_count(h, mask):
    e = 0
    for u in iter_bits(mask):
        e += (h.rows[u] & mask).bit_count()
    return e // 2


def _subset_scan(h, ratio):
    """Maximize ratio(v, e) over induced non-empty vertex subsets.

    Sizes are scanned in decreasing order with a best-so-far prune (each
    size is capped by its complete-graph value); among maximizers the
    lexicographically smallest vertex tuple wins, so reports are
    deterministic.
    """
    if h.n < 1:
        raise ValueError("density needs at least one vertex")
    if h.n > MAX_DENSITY_VERTICES:
        raise TooLargeError(
            f"density scan capped at {MAX_DENSITY_VERTICES} vertices")
    best = None
    best_subset = None
    for size in range(h.n, 0, -1):
        cap = ratio(size, comb(size, 2))
        if cap is not None and best is not None and cap < best:
            continue
        for combo in itertools.combinations(range(h.n), size):
            mask = 0
            for v in combo:
                mask |= 1 << v
            value = ratio(size, _induced_edge_count(h, mask))
            if value is None:
                continue
            if best is None or value > best or (value == best and combo < best_subset):
                best = value
                best_subset = combo
    mask = 0
    for v in best_subset:
        mask |= 1 << v
    sub_edges = []
    for u in best_subset:
        for v in iter_bits(h.rows[u] & mask):
            if u < v:
                sub_edges.append((u, v))
    return best, best_subset, tuple(sub_edges)


def m2(h):
    """Maximum 2-density over all subgraphs, with witness."""
    value, verts, edges = _subset_scan(h, _d2_ratio)
    return DensityReport("m2", value, verts, edges)


def m(h):
    """Maximum e(J)/v(J) over non-empty subgraphs, with witness."""
    value, verts, edges = _subset_scan(h, lambda v, e: Fraction(e, v))
    return DensityReport("m", value, verts, edges)
