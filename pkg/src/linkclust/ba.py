"""Scale-free graph generation by preferential attachment.

The generator starts from a clique on ``m + 1`` nodes and attaches each new
node with ``m`` edges drawn proportionally to current degree, which yields
``C(m+1, 2) + (n - m - 1) * m`` edges in total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .graph import Graph


@dataclass(frozen=True)
class BaParams:
    """Preferential-attachment parameters: ``n`` nodes, ``m`` edges per new node."""

    n: int
    m: int
    seed: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.n <= self.m:
            raise ValueError("n must exceed m")


def generate_ba(params: BaParams) -> Graph:
    """Generate a scale-free graph, deterministically for a given seed.

    Degree-proportional sampling uses the repeated-endpoint list trick: every
    node appears in ``pool`` once per unit of degree, so a uniform draw from
    the pool is a draw proportional to degree.  Draws already chosen for the
    current node are rejected, keeping the graph simple.
    """
    n, m = params.n, params.m
    rng = np.random.default_rng(params.seed)
    edges: list[tuple[int, int]] = []
    pool: list[int] = []
    core = m + 1
    for a in range(core):
        for b in range(a + 1, core):
            edges.append((a, b))
        pool.extend([a] * m)
    for new in range(core, n):
        chosen: list[int] = []
        taken: set[int] = set()
        while len(chosen) < m:
            t = pool[int(rng.integers(len(pool)))]
            if t in taken:
                continue
            taken.add(t)
            chosen.append(t)
        for t in chosen:
            edges.append((t, new))
            pool.append(t)
        pool.extend([new] * m)
    return Graph.from_edges(n, edges)


def degree_exponent(histogram: Mapping[int, float], k_min: int) -> float:
    """Estimate the power-law exponent of a degree histogram.

    Fits a straight line to log density versus log degree over ``k >= k_min``
    using logarithmically spaced bins, which evens out the noisy counts in
    the tail.  Returns the exponent ``gamma`` with ``p(k) ~ k**(-gamma)``.
    """
    ks = np.array(sorted(k for k in histogram if k >= k_min), dtype=float)
    if ks.size < 3:
        raise ValueError("not enough degree values to fit")
    weights = np.array([histogram[int(k)] for k in ks], dtype=float)
    k_lo, k_hi = ks[0], ks[-1]
    n_bins = max(3, int(math.ceil(math.log(k_hi / k_lo) / math.log(1.35))))
    bin_edges = np.geomspace(k_lo, k_hi * (1 + 1e-9), n_bins + 1)
    idx = np.digitize(ks, bin_edges) - 1
    xs: list[float] = []
    ys: list[float] = []
    for b in range(n_bins):
        mask = idx == b
        if not mask.any():
            continue
        mass = weights[mask].sum()
        if mass <= 0:
            continue
        width = bin_edges[b + 1] - bin_edges[b]
        center = math.sqrt(bin_edges[b] * bin_edges[b + 1])
        xs.append(math.log(center))
        ys.append(math.log(mass / width))
    if len(xs) < 3:
        raise ValueError("not enough populated bins to fit")
    slope = np.polyfit(np.array(xs), np.array(ys), 1)[0]
    return -slope
