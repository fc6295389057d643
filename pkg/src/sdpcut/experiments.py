"""Phase-diagram experiment grids and threshold report tables.

A grid sweeps (separation delta, bandwidth parameter p) cells; each cell
runs `trials` independent instances of the chosen random model and counts
how many satisfy the spectral proximity condition (the default
condition-check mode) for each cut variant.  In full-sdp mode every trial
additionally solves the RatioCut SDP and counts exact recoveries.

Bandwidth rules (p is the grid's horizontal parameter, n the per-cluster
point count):  circles sigma = p/n,  lines sigma = p/(2n),
balls sigma = p/(5 sqrt(n)).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .certify import ThresholdEval, proximity_check, threshold_circles, threshold_lines, threshold_sbm
from .datagen import gen_balls, gen_circles_random, gen_lines_random
from .errors import InvalidInput, SdpCutError
from .kernel_graph import KernelSpec, build_graph
from .partition import ground_truth_x
from .rng import derive_seed
from .sdp import SolverOptions, exactness_gap, make_problem, solve

KMEANS_SDP_IMPOSSIBLE_DELTA = math.sqrt(1.5) - 1.0  # ~0.2247

GRID_MODELS = ("circles", "lines", "balls")


def sigma_rule(model: str, p: float, n: int) -> float:
    if model == "circles":
        return p / n
    if model == "lines":
        return p / (2.0 * n)
    if model == "balls":
        return p / (5.0 * math.sqrt(n))
    raise InvalidInput(f"unknown grid model {model!r}")


def _gen_instance(model: str, n: int, delta: float, seed: int):
    if model == "circles":
        return gen_circles_random(n, 1.0, delta, seed)
    if model == "lines":
        return gen_lines_random(n, delta, seed)
    if model == "balls":
        return gen_balls(n, delta, seed)
    raise InvalidInput(f"unknown grid model {model!r}")


@dataclass(frozen=True)
class ExperimentGrid:
    model: str
    deltas: tuple
    p_values: tuple
    n: int = 250
    trials: int = 50
    mode: str = "condition-check"
    seed: int = 0

    def __post_init__(self):
        if self.model not in GRID_MODELS:
            raise InvalidInput(f"unknown grid model {self.model!r}")
        if self.mode not in ("condition-check", "full-sdp"):
            raise InvalidInput(f"unknown mode {self.mode!r}")
        if self.trials < 1 or not self.deltas or not self.p_values:
            raise InvalidInput("need trials >= 1 and nonempty delta / p grids")
        object.__setattr__(self, "deltas", tuple(float(d) for d in self.deltas))
        object.__setattr__(self, "p_values", tuple(float(p) for p in self.p_values))


@dataclass
class GridResult:
    grid: ExperimentGrid
    success_ratiocut: np.ndarray      # (len(deltas), len(p_values)) counts
    success_ncut: np.ndarray
    success_sdp: Optional[np.ndarray]  # full-sdp mode only
    failures: int
    elapsed_seconds: float

    def fractions(self, which: str = "ratiocut") -> np.ndarray:
        counts = {"ratiocut": self.success_ratiocut, "ncut": self.success_ncut,
                  "sdp": self.success_sdp}[which]
        return counts / float(self.grid.trials)


def run_grid(grid: ExperimentGrid) -> GridResult:
    """Sweep the grid; per-trial errors are counted, never abort the sweep."""
    shape = (len(grid.deltas), len(grid.p_values))
    rc = np.zeros(shape, dtype=np.int64)
    nc = np.zeros(shape, dtype=np.int64)
    sdp_counts = np.zeros(shape, dtype=np.int64) if grid.mode == "full-sdp" else None
    failures = 0
    t0 = time.perf_counter()
    for di, delta in enumerate(grid.deltas):
        for pj, p in enumerate(grid.p_values):
            sigma = sigma_rule(grid.model, p, grid.n)
            for t in range(grid.trials):
                trial_seed = derive_seed(grid.seed, di, pj, t)
                try:
                    data = _gen_instance(grid.model, grid.n, delta, trial_seed)
                    g = build_graph(data.points, KernelSpec("heat", sigma))
                    rep_rc = proximity_check(g, data.truth, "ratiocut")
                    rep_nc = proximity_check(g, data.truth, "ncut")
                    rc[di, pj] += rep_rc.holds
                    nc[di, pj] += rep_nc.holds
                    if sdp_counts is not None:
                        prob = make_problem(g, 2, "ratiocut")
                        sol = solve(prob, SolverOptions(seed=trial_seed))
                        gap = exactness_gap(sol, ground_truth_x(g, data.truth, "ratiocut"))
                        sdp_counts[di, pj] += gap <= 1e-3
                except SdpCutError:
                    failures += 1
    return GridResult(grid=grid, success_ratiocut=rc, success_ncut=nc,
                      success_sdp=sdp_counts, failures=failures,
                      elapsed_seconds=time.perf_counter() - t0)


def heatmap_csv_lines(grid: ExperimentGrid, fractions: np.ndarray) -> list[str]:
    """Rows = delta, columns = p, cell = success fraction."""
    header = "delta," + ",".join(f"p={p:g}" for p in grid.p_values)
    lines = [header]
    for di, delta in enumerate(grid.deltas):
        lines.append(f"{delta:g}," + ",".join(f"{v:.4f}" for v in fractions[di]))
    return lines


def gnuplot_matrix_lines(fractions: np.ndarray) -> list[str]:
    return [" ".join(f"{v:.4f}" for v in row) for row in fractions]


def report_thresholds(model: str, params: dict) -> list[ThresholdEval]:
    """Threshold table rows for one model; see the certify evaluators."""
    if model == "circles":
        n = int(params["n"])
        kappa = float(params["kappa"])
        m = int(params.get("m", math.floor(n * kappa)))
        return [threshold_circles(n, m, kappa, float(params["gamma"]))]
    if model == "lines":
        return [threshold_lines(int(params["n"]), float(params["gamma"]),
                                params.get("delta"))]
    if model == "sbm":
        beta = float(params["beta"])
        required = threshold_sbm(beta)
        alpha = params.get("alpha")
        return [ThresholdEval(model="sbm", params={"beta": beta},
                              required=required,
                              actual=None if alpha is None else float(alpha),
                              satisfied=None if alpha is None else float(alpha) > required)]
    if model == "balls":
        delta = float(params["delta"])
        n = int(params.get("n", 1000))
        rows = [
            ThresholdEval(model="balls-kmeans-sdp", params={"delta": delta},
                          required=KMEANS_SDP_IMPOSSIBLE_DELTA, actual=delta,
                          satisfied=delta > KMEANS_SDP_IMPOSSIBLE_DELTA),
        ]
        # empirical spectral-SDP success region for the stochastic ball model
        spectral_min_delta = 0.1 if n >= 1000 else 0.2
        rows.append(ThresholdEval(model="balls-spectral-empirical",
                                  params={"delta": delta, "n": n},
                                  required=spectral_min_delta, actual=delta,
                                  satisfied=delta >= spectral_min_delta))
        return rows
    raise InvalidInput(f"unknown threshold model {model!r}")
