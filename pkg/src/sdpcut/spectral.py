"""Two-step spectral clustering and the shared k-means machinery.

Embedding takes the eigenvectors of the (normalized or unnormalized)
Laplacian for the k smallest eigenvalues; clustering runs seeded
k-means++ / Lloyd on the embedded rows.  In the normalized variant the
rows are rescaled by D^{-1/2} so that the embedding degenerates to exact
indicator vectors when the graph has k connected components.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput
from .kernel_graph import WeightedGraph, laplacian, normalized_laplacian
from .partition import Partition
from .rng import Stream, derive_seed

DEGENERATE_GAP_TOL = 1e-12


@dataclass(frozen=True)
class Embedding:
    """Eigenvectors for the k smallest eigenvalues of the chosen Laplacian."""

    U: np.ndarray
    eigenvalues: np.ndarray
    variant: str
    degenerate_gap: bool = False


@dataclass(frozen=True)
class KMeansResult:
    labels: Partition
    centroids: np.ndarray
    objective: float
    iterations: int
    objective_history: tuple = ()


def embed(g: WeightedGraph, k: int, variant: str = "unnormalized") -> Embedding:
    """Spectral embedding; columns of U span the bottom-k invariant subspace."""
    if not 1 <= k <= g.N:
        raise InvalidInput(f"k={k} out of range for N={g.N}")
    if variant == "unnormalized":
        A = laplacian(g)
    elif variant == "normalized":
        A = normalized_laplacian(g)
    else:
        raise InvalidInput(f"unknown variant {variant!r}")
    vals, vecs = np.linalg.eigh(A)
    degenerate = k < g.N and (vals[k] - vals[k - 1]) < DEGENERATE_GAP_TOL
    return Embedding(U=vecs[:, :k], eigenvalues=vals[:k], variant=variant,
                     degenerate_gap=degenerate)


def _squared_distances(rows: np.ndarray, centers: np.ndarray) -> np.ndarray:
    diff = rows[:, None, :] - centers[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def kmeans_objective_at(rows: np.ndarray, centroids: np.ndarray) -> float:
    """k-means cost of a fixed set of centroids: sum_i min_a ||row_i - c_a||^2."""
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    centroids = np.atleast_2d(np.asarray(centroids, dtype=np.float64))
    return float(_squared_distances(rows, centroids).min(axis=1).sum())


def _plusplus_init(rows: np.ndarray, k: int, stream: Stream) -> np.ndarray:
    n = rows.shape[0]
    centers = np.empty((k, rows.shape[1]))
    centers[0] = rows[stream.index(n)]
    d2 = ((rows - centers[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total > 0:
            u = stream.uniform() * total
            j = min(int(np.searchsorted(np.cumsum(d2), u, side="right")), n - 1)
        else:
            j = stream.index(n)  # all remaining points coincide with a center
        centers[c] = rows[j]
        d2 = np.minimum(d2, ((rows - centers[c]) ** 2).sum(axis=1))
    return centers


def _lloyd(rows: np.ndarray, k: int, stream: Stream, max_iter: int):
    n = rows.shape[0]
    centers = _plusplus_init(rows, k, stream)
    labels = None
    history = []
    for it in range(1, max_iter + 1):
        d2 = _squared_distances(rows, centers)
        new_labels = d2.argmin(axis=1)
        cost = float(d2[np.arange(n), new_labels].sum())
        counts = np.bincount(new_labels, minlength=k)
        for a in np.flatnonzero(counts == 0):
            # empty-cluster repair: donate the point farthest from its centroid
            assign_cost = d2[np.arange(n), new_labels]
            j = int(assign_cost.argmax())
            cost -= float(assign_cost[j])
            new_labels[j] = a
            centers[a] = rows[j]
            d2[:, a] = ((rows - centers[a]) ** 2).sum(axis=1)
            counts = np.bincount(new_labels, minlength=k)
        history.append(cost)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for a in range(k):
            centers[a] = rows[labels == a].mean(axis=0)
    final_obj = kmeans_objective_at_assigned(rows, centers, labels)
    return labels, centers, final_obj, it, tuple(history)


def kmeans_objective_at_assigned(rows: np.ndarray, centers: np.ndarray,
                                 labels: np.ndarray) -> float:
    return float(((rows - centers[labels]) ** 2).sum())


def kmeans(rows: np.ndarray, k: int, seed: int = 0, restarts: int = 10,
           max_iter: int = 300) -> KMeansResult:
    """Best-of-restarts k-means++ / Lloyd; deterministic given the seed.

    Restarts use independent substreams derived from (seed, restart index),
    so the winner does not depend on execution order; ties go to the lowest
    restart index.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    if not 1 <= k <= rows.shape[0]:
        raise InvalidInput(f"k={k} out of range for {rows.shape[0]} rows")
    best = None
    for r in range(max(1, restarts)):
        stream = Stream(derive_seed(seed, r))
        labels, centers, obj, iters, history = _lloyd(rows, k, stream, max_iter)
        if best is None or obj < best[0]:
            best = (obj, labels, centers, iters, history)
    obj, labels, centers, iters, history = best
    return KMeansResult(labels=Partition(labels, k), centroids=centers,
                        objective=obj, iterations=iters,
                        objective_history=history)


def spectral_cluster(g: WeightedGraph, k: int, variant: str = "unnormalized",
                     seed: int = 0, restarts: int = 10) -> KMeansResult:
    """Laplacian eigenmap embedding followed by k-means on the rows."""
    emb = embed(g, k, variant)
    rows = emb.U
    if variant == "normalized":
        rows = rows / np.sqrt(g.d)[:, None]
    return kmeans(rows, k, seed=seed, restarts=restarts)
