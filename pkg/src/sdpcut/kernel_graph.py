"""Kernel similarity graphs and the graph Laplacian family.

A weighted graph is built from a point set through a radial kernel
w_ij = Phi(||x_i - x_j|| / sigma).  From the weight matrix W we derive the
degree vector d = W 1, the unnormalized Laplacian L = D - W, the symmetric
normalized Laplacian L_sym = I - D^{-1/2} W D^{-1/2}, and the random-walk
pair P = D^{-1} W, L_rw = I - P.

Everything is dense: the problem sizes of interest are a few thousand
vertices at most and the heat kernel produces a fully dense W anyway.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDegree, InvalidInput

_DEGREE_TOL = 1e-12


@dataclass(frozen=True)
class PointSet:
    """Finite set of points in R^d, stored as an (n, d) array."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise InvalidInput(f"points must be a 2-d array, got ndim={pts.ndim}")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InvalidInput(f"need at least one point in dimension >= 1, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise InvalidInput("points contain non-finite coordinates")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class KernelSpec:
    """Radial kernel: 'heat' is exp(-t^2/2), 'threshold' is 1_{t <= 1}."""

    kind: str = "heat"
    sigma: float = 1.0

    def __post_init__(self):
        if self.kind not in ("heat", "threshold"):
            raise InvalidInput(f"unknown kernel kind {self.kind!r}")
        if not (self.sigma > 0):
            raise InvalidInput(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class WeightedGraph:
    """Symmetric nonnegative weight matrix with its degree vector."""

    W: np.ndarray
    d: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        W = np.asarray(self.W, dtype=np.float64)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise InvalidInput(f"W must be square, got shape {W.shape}")
        if not np.array_equal(W, W.T):
            raise InvalidInput("W must be exactly symmetric")
        if W.min() < 0:
            raise InvalidInput("W must be entrywise nonnegative")
        object.__setattr__(self, "W", W)
        d = W.sum(axis=1)
        if self.d is not None and not np.allclose(self.d, d, atol=_DEGREE_TOL, rtol=0):
            raise InvalidInput("stored degree vector does not match W 1")
        object.__setattr__(self, "d", d)

    @property
    def N(self) -> int:
        return self.W.shape[0]

    def require_positive_degrees(self):
        if self.d.min() <= 0:
            i = int(np.argmin(self.d))
            raise DegenerateDegree(f"vertex {i} has degree {self.d[i]}")


def build_graph(pts: PointSet, kernel: KernelSpec) -> WeightedGraph:
    """Similarity graph w_ij = Phi(||x_i - x_j|| / sigma) over all pairs.

    The diagonal carries Phi(0) (= 1 for both kernels); the degree vector
    therefore includes the self-weight.  Symmetry is exact by construction
    (the squared-difference distance is evaluated identically for (i, j)
    and (j, i)).
    """
    x = pts.points
    diff = x[:, None, :] - x[None, :, :]
    dist2 = np.einsum("ijk,ijk->ij", diff, diff)
    if kernel.kind == "heat":
        W = np.exp(-dist2 / (2.0 * kernel.sigma**2))
    else:
        W = (dist2 <= kernel.sigma**2).astype(np.float64)
    return WeightedGraph(W)


def laplacian(g: WeightedGraph) -> np.ndarray:
    """Unnormalized Laplacian L = D - W (PSD, constant vector in nullspace)."""
    L = -g.W.copy()
    np.fill_diagonal(L, g.d - np.diag(g.W))
    return L


def normalized_laplacian(g: WeightedGraph) -> np.ndarray:
    """Symmetric normalized Laplacian I - D^{-1/2} W D^{-1/2}."""
    g.require_positive_degrees()
    inv_sqrt = 1.0 / np.sqrt(g.d)
    # outer(s, s) is exactly symmetric, so M inherits W's exact symmetry
    M = g.W * np.outer(inv_sqrt, inv_sqrt)
    Lsym = -M
    np.fill_diagonal(Lsym, 1.0 - np.diag(M))
    return Lsym


def random_walk_matrix(g: WeightedGraph) -> tuple[np.ndarray, np.ndarray]:
    """Markov transition matrix P = D^{-1} W and L_rw = I - P."""
    g.require_positive_degrees()
    P = g.W / g.d[:, None]
    L_rw = -P.copy()
    np.fill_diagonal(L_rw, 1.0 - np.diag(P))
    return P, L_rw


def gershgorin_bound(M: np.ndarray) -> float:
    """Row-sum bound ||M||_inf; dominates the spectral radius for symmetric M."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidInput(f"expected a square matrix, got shape {M.shape}")
    return float(np.abs(M).sum(axis=1).max())
