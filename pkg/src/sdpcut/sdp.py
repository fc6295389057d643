"""Semidefinite relaxation of balanced graph cuts and its solver.

Both cut variants share one program:

    min <A, Z>   s.t.   Z psd,  Z >= 0 entrywise,  Tr(Z) = k,  Z phi = phi

with (A, phi) = (L, all-ones) for ratio cuts and (L_sym, sqrt-degrees) for
normalized cuts.  The solver is a two-block ADMM splitting Z = Y where Z is
constrained to the PSD cone (projection by eigenvalue clipping) and Y to the
polyhedron {Y symmetric, Y >= 0, Tr Y = k, Y phi = phi} (projection by
Dykstra's alternation between the nonnegative orthant and the affine
subspace, whose projection has a closed form).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidInput
from .kernel_graph import WeightedGraph, gershgorin_bound, laplacian, normalized_laplacian
from .partition import GroundTruthX, Partition, partition_phi, x_from_phi
from .spectral import kmeans

EXACT_RECOVERY_GAP = 1e-3


@dataclass(frozen=True)
class SdpProblem:
    A: np.ndarray
    phi: np.ndarray
    k: int
    variant: str

    def __post_init__(self):
        A = np.asarray(self.A, dtype=np.float64)
        phi = np.asarray(self.phi, dtype=np.float64)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InvalidInput(f"A must be square, got {A.shape}")
        if not np.allclose(A, A.T, atol=1e-10, rtol=0):
            raise InvalidInput("A must be symmetric")
        if phi.shape != (A.shape[0],):
            raise InvalidInput("phi length must match A")
        if phi.min() <= 0:
            raise InvalidInput("phi must be entrywise positive")
        if not 1 <= self.k <= A.shape[0]:
            raise InvalidInput(f"k={self.k} out of range for N={A.shape[0]}")
        object.__setattr__(self, "A", 0.5 * (A + A.T))
        object.__setattr__(self, "phi", phi)

    @property
    def N(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class SolverOptions:
    tol_primal: float = 1e-6
    tol_dual: float = 1e-6
    max_iters: int = 5000
    rho: float = 1.0
    adaptive_rho: bool = True
    over_relaxation: float = 1.6
    warm_start: bool = True
    seed: int = 0
    dykstra_max_iter: int = 30
    dykstra_tol: float = 1e-12

    def __post_init__(self):
        if self.tol_primal <= 0 or self.tol_dual <= 0:
            raise InvalidInput("tolerances must be positive")
        if self.rho <= 0:
            raise InvalidInput("rho must be positive")


@dataclass
class SdpSolution:
    Z: np.ndarray
    objective: float
    primal_residual: float
    dual_residual: float
    psd_min_eig: float
    min_entry: float
    trace_gap: float
    phi_gap: float
    iterations: int
    converged: bool
    problem: SdpProblem = field(repr=False, default=None)  # type: ignore[assignment]

    def feasibility_gaps(self) -> dict:
        return {
            "psd_min_eig": self.psd_min_eig,
            "min_entry": self.min_entry,
            "trace_gap": self.trace_gap,
            "phi_gap": self.phi_gap,
        }


def make_problem(g: WeightedGraph, k: int, variant: str) -> SdpProblem:
    """Instantiate the cut SDP for a graph: (L, 1) or (L_sym, sqrt(d))."""
    if variant == "ratiocut":
        return SdpProblem(laplacian(g), np.ones(g.N), k, variant)
    if variant == "ncut":
        return SdpProblem(normalized_laplacian(g), np.sqrt(g.d), k, variant)
    raise InvalidInput(f"unknown variant {variant!r}")


def project_psd(M: np.ndarray) -> np.ndarray:
    """Nearest (Frobenius) positive semidefinite matrix: clip negative eigenvalues."""
    M = 0.5 * (M + M.T)
    vals, vecs = np.linalg.eigh(M)
    if vals[0] >= 0:
        return M
    pos = vals > 0
    V = vecs[:, pos] * vals[pos]
    out = V @ vecs[:, pos].T
    return 0.5 * (out + out.T)


def project_affine(M: np.ndarray, phi: np.ndarray, k: int) -> np.ndarray:
    """Projection onto {Y symmetric, Tr(Y) = k, Y phi = phi} in closed form.

    The multipliers (mu for the trace, nu for the phi constraint) solve a
    2x2 normal-equation system; the projection is
    Y = sym(M) + mu*I + (nu phi^T + phi nu^T)/2.
    """
    N = M.shape[0]
    M = 0.5 * (M + M.T)
    p2 = phi @ phi
    g = phi - M @ phi
    r0 = k - np.trace(M)
    c = (phi @ g) / p2
    mu = (r0 - c) / (N - 1)
    t = c - mu
    nu = (2.0 / p2) * (g - (mu + 0.5 * t) * phi)
    Y = M + 0.5 * (np.outer(nu, phi) + np.outer(phi, nu))
    Y[np.diag_indices(N)] += mu
    return Y


def project_polyhedron(M: np.ndarray, phi: np.ndarray, k: int,
                       max_iter: int = 30, tol: float = 1e-12) -> np.ndarray:
    """Dykstra alternation between the nonnegative orthant and the affine set.

    Returns an iterate that satisfies the affine constraints exactly; the
    alternation stops once the entrywise negativity is below tol (membership
    in the intersection up to tol), so near-feasible inputs exit immediately.
    """
    x = project_affine(M, phi, k)
    if x.min() >= -tol:
        return x
    correction = np.zeros_like(x)
    for _ in range(max_iter):
        v = x + correction
        y = np.maximum(v, 0.0)
        correction = v - y
        x = project_affine(y, phi, k)
        if x.min() >= -tol:
            break
    return x


def _spectral_warm_start(prob: SdpProblem, seed: int) -> np.ndarray:
    """Feasible X built from k-means on the bottom-k eigenvectors of A."""
    vals, vecs = np.linalg.eigh(prob.A)
    rows = vecs[:, : prob.k] / prob.phi[:, None]
    km = kmeans(rows, prob.k, seed=seed, restarts=5)
    return x_from_phi(km.labels.labels, prob.k, prob.phi)


def _cold_start(prob: SdpProblem) -> np.ndarray:
    N, k, phi = prob.N, prob.k, prob.phi
    M = (k / N) * np.eye(N) + (1.0 - k / N) * np.outer(phi, phi) / (phi @ phi)
    return project_polyhedron(M, phi, k)


def solve(prob: SdpProblem, opts: SolverOptions = SolverOptions()) -> SdpSolution:
    """Run the ADMM splitting until residuals and feasibility gaps pass.

    Never raises on non-convergence: the returned solution carries
    converged=False plus diagnostics when max_iters is exhausted.
    """
    N, k, phi = prob.N, prob.k, prob.phi
    # scale-invariant stepping: solve with A / ||A|| and rescale the objective
    a_scale = max(gershgorin_bound(prob.A), np.finfo(float).tiny)
    A_s = prob.A / a_scale

    Y = _spectral_warm_start(prob, opts.seed) if opts.warm_start else _cold_start(prob)
    S = np.zeros_like(Y)
    rho = opts.rho
    alpha = opts.over_relaxation
    r_prim = r_dual = np.inf

    it = 0
    for it in range(1, opts.max_iters + 1):
        Z = project_psd(Y - S - A_s / rho)
        Z_mix = alpha * Z + (1.0 - alpha) * Y
        Y_new = project_polyhedron(Z_mix + S, phi, k,
                                   max_iter=opts.dykstra_max_iter,
                                   tol=opts.dykstra_tol)
        S = S + Z_mix - Y_new
        r_prim = np.linalg.norm(Z - Y_new)
        r_dual = rho * np.linalg.norm(Y_new - Y)
        Y = Y_new
        ref = max(1.0, np.linalg.norm(Y))
        if r_prim <= opts.tol_primal * ref and r_dual <= opts.tol_dual * ref:
            break
        if opts.adaptive_rho and it % 10 == 0:
            if r_prim > 10.0 * r_dual:
                rho *= 2.0
                S = S / 2.0
            elif r_dual > 10.0 * r_prim:
                rho /= 2.0
                S = S * 2.0

    # final report on the polyhedron iterate pushed back onto the PSD cone
    Z_final = project_psd(Y)
    vals = np.linalg.eigvalsh(Z_final)
    z_norm = max(abs(vals[0]), abs(vals[-1]))
    psd_min_eig = float(vals[0])
    min_entry = float(Z_final.min())
    trace_gap = float(abs(np.trace(Z_final) - k))
    phi_gap = float(np.abs(Z_final @ phi - phi).max())
    ref = max(1.0, np.linalg.norm(Y))
    residuals_ok = r_prim <= opts.tol_primal * ref and r_dual <= opts.tol_dual * ref
    feasible = (
        psd_min_eig >= -1e-6 * max(1.0, z_norm)
        and min_entry >= -1e-6
        and trace_gap <= 1e-6 * k
        and phi_gap <= 1e-6 * max(1.0, np.abs(phi).max())
    )
    return SdpSolution(
        Z=Z_final,
        objective=float(np.tensordot(prob.A, Z_final)),
        primal_residual=float(r_prim),
        dual_residual=float(r_dual),
        psd_min_eig=psd_min_eig,
        min_entry=min_entry,
        trace_gap=trace_gap,
        phi_gap=phi_gap,
        iterations=it,
        converged=bool(residuals_ok and feasible),
        problem=prob,
    )


def round_solution(sol: SdpSolution, k: int, seed: int = 0) -> Partition:
    """Spectral rounding: k-means on the top-k eigenvectors of Z.

    Rows are rescaled by 1/phi so that an exact partition matrix produces
    constant rows per cluster for both variants.  When the rebuilt partition
    matrix is within EXACT_RECOVERY_GAP of Z (relative Frobenius), the
    recovered partition is exact.
    """
    Z = sol.Z
    if not 1 <= k <= Z.shape[0]:
        raise InvalidInput(f"k={k} out of range for N={Z.shape[0]}")
    phi = sol.problem.phi if sol.problem is not None else np.ones(Z.shape[0])
    _, vecs = np.linalg.eigh(Z)
    rows = vecs[:, -k:] / phi[:, None]
    km = kmeans(rows, k, seed=seed, restarts=10)
    return km.labels


def rounding_gap(sol: SdpSolution, p: Partition) -> float:
    """Relative distance from Z to the partition matrix rebuilt from p."""
    phi = sol.problem.phi
    Xp = x_from_phi(p.labels, p.k, phi)
    return float(np.linalg.norm(sol.Z - Xp) / np.linalg.norm(Xp))


def exactness_gap(sol: SdpSolution, x: GroundTruthX) -> float:
    """||Z - X||_F / ||X||_F against a supplied ground-truth matrix."""
    if sol.Z.shape != x.X.shape:
        raise InvalidInput("shape mismatch between solution and ground truth")
    return float(np.linalg.norm(sol.Z - x.X) / np.linalg.norm(x.X))
