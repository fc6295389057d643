"""Generators for the four experiment models, with planted ground truth.

All randomness comes from the package's counter-based generator (rng
module), so every dataset is a pure function of (parameters, seed) and
reproduces bit-for-bit across runs and platforms.  Draw order is part of
the contract and documented per generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidInput
from .kernel_graph import PointSet, WeightedGraph
from .partition import Partition
from .rng import Stream


@dataclass(frozen=True)
class Dataset:
    """Generated point cloud with its planted partition."""

    points: PointSet
    truth: Partition
    model: str
    params: dict
    seed: Optional[int] = None


@dataclass(frozen=True)
class SbmGraph:
    """Planted two-block binary graph (no self-loops)."""

    W: np.ndarray
    p: float
    q: float
    truth: Partition
    seed: int

    def to_graph(self) -> WeightedGraph:
        return WeightedGraph(self.W)


def _two_cluster_truth(n1: int, n2: int) -> Partition:
    return Partition(np.repeat([0, 1], [n1, n2]), 2)


def gen_circles_deterministic(n: int, r1: float = 1.0, kappa: float = 1.5) -> Dataset:
    """n points equispaced on radius r1, floor(n*kappa) on radius kappa*r1."""
    if n < 3 or kappa <= 1:
        raise InvalidInput("need n >= 3 and kappa > 1")
    m = int(math.floor(n * kappa))
    r2 = kappa * r1
    ti = 2.0 * math.pi * np.arange(1, n + 1) / n
    tj = 2.0 * math.pi * np.arange(1, m + 1) / m
    pts = np.concatenate([
        r1 * np.column_stack([np.cos(ti), np.sin(ti)]),
        r2 * np.column_stack([np.cos(tj), np.sin(tj)]),
    ])
    return Dataset(PointSet(pts), _two_cluster_truth(n, m), "circles",
                   {"n": n, "r1": r1, "kappa": kappa, "m": m})


def gen_circles_random(n: int, r1: float, delta: float, seed: int) -> Dataset:
    """Uniform angles on radii r1 and r1*(1+delta); sizes n and floor(n*(1+delta)).

    Draw order: n angle uniforms for the inner circle, then m for the outer.
    """
    if n < 3 or delta <= 0:
        raise InvalidInput("need n >= 3 and delta > 0")
    m = int(math.floor(n * (1.0 + delta)))
    stream = Stream(seed)
    ti = 2.0 * math.pi * stream.uniforms(n)
    tj = 2.0 * math.pi * stream.uniforms(m)
    r2 = r1 * (1.0 + delta)
    pts = np.concatenate([
        r1 * np.column_stack([np.cos(ti), np.sin(ti)]),
        r2 * np.column_stack([np.cos(tj), np.sin(tj)]),
    ])
    return Dataset(PointSet(pts), _two_cluster_truth(n, m), "circles-random",
                   {"n": n, "r1": r1, "delta": delta, "m": m}, seed)


def gen_lines_deterministic(n: int, delta: float) -> Dataset:
    """n equispaced points on each of two vertical unit segments at x = -/+ delta/2."""
    if n < 2:
        raise InvalidInput("need n >= 2")
    heights = np.arange(n) / (n - 1)
    left = np.column_stack([np.full(n, -delta / 2.0), heights])
    right = np.column_stack([np.full(n, delta / 2.0), heights])
    return Dataset(PointSet(np.concatenate([left, right])), _two_cluster_truth(n, n),
                   "lines", {"n": n, "delta": delta})


def gen_lines_random(n: int, delta: float, seed: int) -> Dataset:
    """Uniform heights on [0,1]; draw order: n for the left line, n for the right."""
    if n < 2:
        raise InvalidInput("need n >= 2")
    stream = Stream(seed)
    left = np.column_stack([np.full(n, -delta / 2.0), stream.uniforms(n)])
    right = np.column_stack([np.full(n, delta / 2.0), stream.uniforms(n)])
    return Dataset(PointSet(np.concatenate([left, right])), _two_cluster_truth(n, n),
                   "lines-random", {"n": n, "delta": delta}, seed)


def sample_unit_disk(stream: Stream, n: int) -> np.ndarray:
    """Exact uniform sampling: radius sqrt(u), angle 2 pi v, drawn pairwise."""
    u = stream.uniforms(2 * n)
    r = np.sqrt(u[0::2])
    theta = 2.0 * math.pi * u[1::2]
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def gen_balls(n: int, delta: float, seed: int) -> Dataset:
    """Two unit disks centered at (-(delta/2)-1, 0) and ((delta/2)+1, 0), n points each.

    Draw order: 2n uniforms for the left disk (radius, angle interleaved),
    then 2n for the right.
    """
    if n < 1 or delta < 0:
        raise InvalidInput("need n >= 1 and delta >= 0")
    stream = Stream(seed)
    left = sample_unit_disk(stream, n) + np.array([-delta / 2.0 - 1.0, 0.0])
    right = sample_unit_disk(stream, n) + np.array([delta / 2.0 + 1.0, 0.0])
    return Dataset(PointSet(np.concatenate([left, right])), _two_cluster_truth(n, n),
                   "balls", {"n": n, "delta": delta}, seed)


def gen_sbm(n: int, alpha: float, beta: float, seed: int) -> SbmGraph:
    """Two planted blocks of n vertices; edge probabilities from log-degree scaling.

    With N = 2n: within-block probability p = alpha * log(N) / N, cross-block
    q = beta * log(N) / N (natural log).  Entries are independent symmetric
    Bernoulli draws; the diagonal is zero (no self-loops).  Draw order: one
    uniform per upper-triangle pair (i, j), i < j, row-major.
    """
    N = 2 * n
    p = alpha * math.log(N) / N
    q = beta * math.log(N) / N
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise InvalidInput(f"edge probabilities out of range: p={p:.4f}, q={q:.4f}")
    truth = _two_cluster_truth(n, n)
    iu, ju = np.triu_indices(N, k=1)
    same = truth.labels[iu] == truth.labels[ju]
    prob = np.where(same, p, q)
    u = Stream(seed).uniforms(iu.size)
    edges = (u < prob).astype(np.float64)
    W = np.zeros((N, N))
    W[iu, ju] = edges
    W[ju, iu] = edges
    return SbmGraph(W=W, p=p, q=q, truth=truth, seed=seed)
