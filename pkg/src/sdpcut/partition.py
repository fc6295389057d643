"""Partitions, cut objectives, ground-truth SDP matrices, iso/delta split.

For a partition {G_a} of the vertices, the weight matrix decomposes into a
within-cluster part W_iso (entries with both ends in the same cluster) and
the inter-cluster remainder W_delta = W - W_iso.  The derived Laplacians
L_iso / L_delta and the random-walk analogues quantify within- and
inter-cluster connectivity; every certificate in this package is stated in
terms of this decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .errors import InvalidInput, InvalidPartition, OracleTooLarge
from .kernel_graph import WeightedGraph, laplacian

BRUTE_FORCE_MAX_N = 14


@dataclass(frozen=True)
class Partition:
    """Cluster assignment: labels[i] in [0, k), every cluster nonempty."""

    labels: np.ndarray
    k: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1 or labels.size == 0:
            raise InvalidPartition("labels must be a nonempty 1-d integer array")
        if self.k < 1:
            raise InvalidPartition(f"k must be >= 1, got {self.k}")
        if labels.min() < 0 or labels.max() >= self.k:
            raise InvalidPartition(f"labels must lie in [0, {self.k})")
        sizes = np.bincount(labels, minlength=self.k)
        if sizes.min() == 0:
            raise InvalidPartition(f"cluster {int(np.argmin(sizes))} is empty")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        labels = np.asarray(labels, dtype=np.int64)
        return cls(labels, int(labels.max()) + 1 if labels.size else 0)

    @property
    def N(self) -> int:
        return self.labels.size

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)

    def cluster_indices(self, a: int) -> np.ndarray:
        return np.flatnonzero(self.labels == a)

    def volumes(self, g: WeightedGraph) -> np.ndarray:
        return np.array([g.d[self.cluster_indices(a)].sum() for a in range(self.k)])


def canonical_labels(labels: np.ndarray) -> np.ndarray:
    """Relabel clusters in order of first occurrence (permutation-invariant form)."""
    labels = np.asarray(labels)
    mapping: dict[int, int] = {}
    out = np.empty_like(labels)
    for i, lab in enumerate(labels):
        if lab not in mapping:
            mapping[int(lab)] = len(mapping)
        out[i] = mapping[int(lab)]
    return out


def partitions_agree(a: Partition, b: Partition) -> bool:
    """True when the two assignments coincide up to a label permutation."""
    if a.N != b.N or a.k != b.k:
        return False
    return bool(np.array_equal(canonical_labels(a.labels), canonical_labels(b.labels)))


def _check_match(g: WeightedGraph, p: Partition):
    if p.N != g.N:
        raise InvalidPartition(f"partition over {p.N} vertices, graph has {g.N}")


@dataclass(frozen=True)
class PartitionSplit:
    """iso/delta decomposition of (graph, partition); see module docstring.

    P_iso, L_rw_iso are None when some vertex has zero within-cluster degree;
    P_delta is None when some vertex has zero total degree.  The two scalars
    d_delta_norm = ||D_delta|| (max diagonal) and p_delta_inf_norm =
    ||P_delta||_inf (max row sum) are the inter-cluster connectivity measures
    used by the proximity conditions.
    """

    W_iso: np.ndarray
    D_iso: np.ndarray
    L_iso: np.ndarray
    P_iso: Optional[np.ndarray]
    L_rw_iso: Optional[np.ndarray]
    W_delta: np.ndarray
    D_delta: np.ndarray
    L_delta: np.ndarray
    P_delta: Optional[np.ndarray]
    d_delta_norm: float
    p_delta_inf_norm: Optional[float]


def split(g: WeightedGraph, p: Partition) -> PartitionSplit:
    """Decompose W into within-cluster and inter-cluster parts."""
    _check_match(g, p)
    same = p.labels[:, None] == p.labels[None, :]
    W_iso = np.where(same, g.W, 0.0)
    W_delta = np.where(same, 0.0, g.W)

    d_iso = W_iso.sum(axis=1)
    d_delta = W_delta.sum(axis=1)
    D_iso = np.diag(d_iso)
    D_delta = np.diag(d_delta)
    L_iso = D_iso - W_iso
    L_delta = D_delta - W_delta

    if d_iso.min() > 0:
        P_iso = W_iso / d_iso[:, None]
        L_rw_iso = np.eye(g.N) - P_iso
    else:
        P_iso = None
        L_rw_iso = None

    if g.d.min() > 0:
        P_delta = W_delta / g.d[:, None]
        p_delta_inf = float(P_delta.sum(axis=1).max())
    else:
        P_delta = None
        p_delta_inf = None

    return PartitionSplit(
        W_iso=W_iso, D_iso=D_iso, L_iso=L_iso, P_iso=P_iso, L_rw_iso=L_rw_iso,
        W_delta=W_delta, D_delta=D_delta, L_delta=L_delta, P_delta=P_delta,
        d_delta_norm=float(d_delta.max()), p_delta_inf_norm=p_delta_inf,
    )


def cut_value(g: WeightedGraph, idx: np.ndarray) -> float:
    """Total weight of edges leaving the vertex set idx."""
    return float(g.d[idx].sum() - g.W[np.ix_(idx, idx)].sum())


def ratio_cut(g: WeightedGraph, p: Partition) -> float:
    """sum_a cut(G_a, complement) / |G_a|."""
    _check_match(g, p)
    total = 0.0
    for a in range(p.k):
        idx = p.cluster_indices(a)
        total += cut_value(g, idx) / idx.size
    return total


def normalized_cut(g: WeightedGraph, p: Partition) -> float:
    """sum_a cut(G_a, complement) / Vol(G_a)."""
    _check_match(g, p)
    g.require_positive_degrees()
    total = 0.0
    for a in range(p.k):
        idx = p.cluster_indices(a)
        total += cut_value(g, idx) / g.d[idx].sum()
    return total


@dataclass(frozen=True)
class GroundTruthX:
    """Rank-k projection-like partition matrix feasible for the SDP."""

    X: np.ndarray
    variant: str


def partition_phi(g: WeightedGraph, variant: str) -> np.ndarray:
    """The SDP's fixed vector: all-ones for ratiocut, sqrt(degrees) for ncut."""
    if variant == "ratiocut":
        return np.ones(g.N)
    if variant == "ncut":
        g.require_positive_degrees()
        return np.sqrt(g.d)
    raise InvalidInput(f"unknown variant {variant!r}")


def x_from_phi(labels: np.ndarray, k: int, phi: np.ndarray) -> np.ndarray:
    """Block matrix with (a,a)-block phi_a phi_a^T / ||phi_a||^2."""
    X = np.zeros((labels.size, labels.size))
    for a in range(k):
        idx = np.flatnonzero(labels == a)
        block = np.outer(phi[idx], phi[idx]) / (phi[idx] @ phi[idx])
        X[np.ix_(idx, idx)] = block
    return X


def ground_truth_x(g: WeightedGraph, p: Partition, variant: str) -> GroundTruthX:
    """Partition matrix of the given cut variant (the SDP's target optimum)."""
    _check_match(g, p)
    phi = partition_phi(g, variant)
    return GroundTruthX(x_from_phi(p.labels, p.k, phi), variant)


def _surjective_labelings(n: int, k: int) -> Iterator[np.ndarray]:
    """All labelings of n items with exactly k nonempty classes, one per
    set partition, in lexicographic order of the canonical label vector."""
    labels = np.zeros(n, dtype=np.int64)

    def rec(i: int, used: int):
        if i == n:
            if used == k:
                yield labels.copy()
            return
        top = min(used, k - 1)
        for v in range(top + 1):
            new_used = max(used, v + 1)
            # remaining slots must still allow all k classes to appear
            if k - new_used <= n - i - 1:
                labels[i] = v
                yield from rec(i + 1, new_used)

    yield from rec(1, 1)  # labels[0] = 0 fixed: canonical form


def brute_force_min_cut(g: WeightedGraph, k: int, objective: str = "ratiocut") -> tuple[Partition, float]:
    """Exact minimizer over all k-partitions; test oracle for small graphs.

    Ties are broken by the lexicographically smallest canonical label vector
    (enumeration order guarantees this with a strict comparison).
    """
    if g.N > BRUTE_FORCE_MAX_N:
        raise OracleTooLarge(f"N={g.N} exceeds enumeration guard {BRUTE_FORCE_MAX_N}")
    if not 1 <= k <= g.N:
        raise InvalidInput(f"k={k} out of range for N={g.N}")
    evaluate = {"ratiocut": ratio_cut, "ncut": normalized_cut}.get(objective)
    if evaluate is None:
        raise InvalidInput(f"unknown objective {objective!r}")

    best_labels = None
    best_value = np.inf
    for labels in _surjective_labelings(g.N, k):
        value = evaluate(g, Partition(labels, k))
        if value < best_value:
            best_value = value
            best_labels = labels
    assert best_labels is not None
    return Partition(best_labels, k), float(best_value)
