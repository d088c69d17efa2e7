"""Exact PPT global robustness by semidefinite programming.

Primal problem (one PSD constraint per requested bipartition):

    min tr(sigma)  s.t.  sigma >= 0,  (rho + sigma)^Gamma_T >= 0  for all T

Dual:  max -sum_T tr(Y_T rho^Gamma_T)  s.t.  Y_T >= 0, sum_T Y_T^Gamma_T <= I.

Every returned solution carries a rescaled dual certificate that is verified
post-hoc by fresh eigenvalue computations, so the reported duality gap is a
rigorous bound regardless of solver internals.

Two paths:
  * ``ppt_robustness``: dense Hermitian sigma (2^2n real unknowns), intended
    for n <= 4; each Hermitian constraint enters as its real symmetric
    embedding.
  * ``symmetry_reduced_robustness``: for graph-diagonal rho the optimum may
    be sought among graph-diagonal sigma (stabilizer twirling preserves
    feasibility and the objective), where every partial transpose is again
    diagonal in the graph basis.  The program collapses to a linear program
    in the 2^n diagonal weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import (
    eig_hermitian,
    graph_diagonal_operator,
    partial_transpose,
    trace_inner,
)
from .pauli import Graph, LocalFrame, stabilizer_group, transformed_generators
from .reconstruct import state_p
from .solver import (
    LpBlock,
    SdpBlock,
    SdpConvergenceError,
    real_embed,
    real_unembed,
    solve_conic,
)

MAX_DENSE_DIM = 64
PSD_FLOOR = -1e-8
GAP_BOUND = 1e-6


def all_bipartitions(n: int) -> list[tuple[int, ...]]:
    """All bipartitions of {1..n}, one representative per complement pair."""
    out = []
    for mask in range(1, (1 << n) - 1):
        if mask & 1:  # keep the side containing qubit 1
            out.append(tuple(q for q in range(1, n + 1) if (mask >> (q - 1)) & 1))
    return out


def canonical_partitions(n: int, partitions) -> list[tuple[int, ...]]:
    full = set(range(1, n + 1))
    seen = []
    for part in partitions:
        s = set(part)
        if not s or s == full or not s <= full:
            raise ValueError(f"partition {sorted(s)} is not a proper nonempty subset")
        if 1 not in s:
            s = full - s
        t = tuple(sorted(s))
        if t not in seen:
            seen.append(t)
    return seen


@dataclass(frozen=True)
class RobustnessProblem:
    rho: np.ndarray
    partitions: list

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=np.complex128)
        n = rho.shape[0].bit_length() - 1
        if rho.shape[0] != 1 << n or rho.shape[0] != rho.shape[1]:
            raise ValueError("rho must be square with power-of-2 dimension")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(
            self, "partitions", canonical_partitions(n, self.partitions)
        )

    @property
    def n(self) -> int:
        return self.rho.shape[0].bit_length() - 1


@dataclass
class SdpSolution:
    """Certified solution of the PPT-robustness program."""

    value: float
    sigma: np.ndarray
    duality_gap: float
    dual_value: float
    dual_certificate: list
    partitions: list
    min_eigs: dict
    sigma_min_eig: float
    iterations: int
    method: str

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "duality_gap": self.duality_gap,
            "dual_value": self.dual_value,
            "method": self.method,
            "iterations": self.iterations,
            "partitions": [list(t) for t in self.partitions],
            "sigma_min_eig": self.sigma_min_eig,
            "partial_transpose_min_eigs": {
                ",".join(map(str, t)): v for t, v in self.min_eigs.items()
            },
        }


def ppt_min_eig(rho: np.ndarray, partition) -> float:
    """Minimum eigenvalue of rho^Gamma over the given qubit subset."""
    w, _ = eig_hermitian(partial_transpose(rho, partition))
    return float(w[0])


def _check_density(rho: np.ndarray):
    w, _ = eig_hermitian(rho)
    if w[0] < -1e-9:
        raise ValueError(f"rho is not PSD (min eigenvalue {w[0]:.3e})")
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > 1e-9:
        raise ValueError(f"rho has trace {tr!r}, expected 1")


def _hermitian_basis(d: int) -> list[np.ndarray]:
    basis = []
    for a in range(d):
        e = np.zeros((d, d), dtype=np.complex128)
        e[a, a] = 1.0
        basis.append(e)
    for a in range(d):
        for b in range(a + 1, d):
            e = np.zeros((d, d), dtype=np.complex128)
            e[a, b] = 1.0
            e[b, a] = 1.0
            basis.append(e)
            e = np.zeros((d, d), dtype=np.complex128)
            e[a, b] = -1.0j
            e[b, a] = 1.0j
            basis.append(e)
    return basis


def _certify(rho, sigma, partitions, raw_multipliers, method, iterations):
    """Post-hoc feasibility and weak-duality check with fresh eigensolves.

    raw_multipliers: complex Hermitian Y_T per partition (any roundoff);
    they are clipped to the PSD cone and rescaled so sum Y_T^Gamma <= I holds
    exactly, which turns them into a rigorous dual bound.
    """
    d = rho.shape[0]
    value = float(np.trace(sigma).real)
    ws, _ = eig_hermitian(sigma)
    sigma_min = float(ws[0])
    if sigma_min < PSD_FLOOR:
        raise SdpConvergenceError(f"sigma not PSD ({sigma_min:.3e})")
    min_eigs = {}
    for part in partitions:
        w, _ = eig_hermitian(partial_transpose(rho + sigma, part))
        min_eigs[part] = float(w[0])
        if w[0] < PSD_FLOOR:
            raise SdpConvergenceError(
                f"(rho+sigma)^Gamma not PSD on {part} ({w[0]:.3e})"
            )
    clipped = []
    for Y in raw_multipliers:
        w, V = eig_hermitian(Y)
        wc = np.clip(w, 0.0, None)
        clipped.append((V * wc) @ V.conj().T)
    excess = np.zeros((d, d), dtype=np.complex128)
    for part, Y in zip(partitions, clipped):
        excess += partial_transpose(Y, part)
    we, _ = eig_hermitian(np.eye(d) - excess)
    theta = max(0.0, -float(we[0]))
    scale = 1.0 / (1.0 + theta)
    certificate = [scale * Y for Y in clipped]
    dual_value = -sum(
        trace_inner(Y, partial_transpose(rho, part))
        for part, Y in zip(partitions, certificate)
    )
    gap = value - dual_value
    if gap > GAP_BOUND * (1.0 + abs(value)) or gap < -1e-9:
        raise SdpConvergenceError(
            f"certified duality gap {gap:.3e} exceeds tolerance"
        )
    return SdpSolution(
        value=value,
        sigma=sigma,
        duality_gap=gap,
        dual_value=dual_value,
        dual_certificate=certificate,
        partitions=list(partitions),
        min_eigs=min_eigs,
        sigma_min_eig=sigma_min,
        iterations=iterations,
        method=method,
    )


def _trivial_solution(rho, partitions, min_eigs, method):
    d = rho.shape[0]
    return SdpSolution(
        value=0.0,
        sigma=np.zeros((d, d), dtype=np.complex128),
        duality_gap=0.0,
        dual_value=0.0,
        dual_certificate=[np.zeros((d, d), dtype=np.complex128) for _ in partitions],
        partitions=list(partitions),
        min_eigs=dict(zip(partitions, min_eigs)),
        sigma_min_eig=0.0,
        iterations=0,
        method=method,
    )


def ppt_robustness(
    problem: RobustnessProblem,
    gap_tol: float = 1e-7,
    max_iter: int = 200,
) -> SdpSolution:
    """Dense-path PPT robustness with a verified dual certificate."""
    rho = problem.rho
    d = rho.shape[0]
    if d > MAX_DENSE_DIM:
        raise ValueError(
            f"dense path capped at dimension {MAX_DENSE_DIM}; "
            "use symmetry_reduced_robustness for graph-diagonal states"
        )
    _check_density(rho)
    partitions = problem.partitions
    if not partitions:
        raise ValueError("need at least one partition")
    pt_eigs = [ppt_min_eig(rho, part) for part in partitions]
    if min(pt_eigs) >= -1e-12:
        return _trivial_solution(rho, partitions, pt_eigs, "dense")

    basis = _hermitian_basis(d)
    m = len(basis)
    c = np.array([float(np.trace(B).real) for B in basis])
    blocks = [SdpBlock(np.zeros((2 * d, 2 * d)), np.stack([real_embed(B) for B in basis]))]
    for part in partitions:
        F0 = real_embed(partial_transpose(rho, part))
        F = np.stack([real_embed(partial_transpose(B, part)) for B in basis])
        blocks.append(SdpBlock(F0, F))
    t0 = 0.5 + 2.0 * max(0.0, -min(pt_eigs))
    x0 = np.zeros(m)
    x0[:d] = t0  # sigma starts at t0 * identity
    res = solve_conic(c, blocks, x0, gap_tol=gap_tol, max_iter=max_iter)
    sigma = np.zeros((d, d), dtype=np.complex128)
    for xi, B in zip(res.x, basis):
        sigma += xi * B
    # embedded inner products double complex traces, hence the factor 2
    multipliers = [2.0 * real_unembed(Z) for Z in res.duals[1:]]
    return _certify(rho, sigma, partitions, multipliers, "dense", res.iterations)


# ----------------------------------------------------------------------
# Symmetry-reduced path for graph-diagonal states.


def _partition_sign_vector(group, partition) -> np.ndarray:
    """(-1)^{#Y factors inside the partition} per stabilizer element:
    the sign picked up by each S_k under that partial transpose."""
    tmask = 0
    for q in partition:
        tmask |= 1 << (q - 1)
    out = np.empty(len(group))
    for k, s in enumerate(group):
        out[k] = -1.0 if (s.x & s.z & tmask).bit_count() & 1 else 1.0
    return out


def _walsh_matrix(n: int) -> np.ndarray:
    j = np.arange(1 << n)
    bits = (j[:, None] & j[None, :])
    pop = np.zeros_like(bits)
    for b in range(n):
        pop += (bits >> b) & 1
    return 1.0 - 2.0 * (pop & 1)


def symmetry_reduced_robustness(
    state,
    graph: Graph,
    frame: LocalFrame | None = None,
    partitions=None,
    gap_tol: float = 1e-7,
    max_iter: int = 200,
) -> SdpSolution:
    """PPT robustness restricted to graph-diagonal sigma.

    A stabilizer twirl maps any feasible sigma to a graph-diagonal one with
    the same trace (partial transposes of stabilizer elements are the same
    elements up to sign), so for graph-diagonal rho this restriction is
    exact; the program becomes a linear program in the diagonal weights.
    """
    p = state_p(state)
    n = graph.n
    if p.size != 1 << n:
        raise ValueError("population vector length must be 2^n")
    if p.min() < -1e-10 or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError("state must be a physical population vector")
    frame = frame or LocalFrame.identity(n)
    partitions = canonical_partitions(
        n, partitions if partitions is not None else all_bipartitions(n)
    )
    if not partitions:
        raise ValueError("need at least one partition")
    group = stabilizer_group(transformed_generators(graph, frame))
    D = 1 << n
    H = _walsh_matrix(n)
    mats = []
    offsets = []
    for part in partitions:
        eps = _partition_sign_vector(group, part)
        M = (H @ (eps[:, None] * H)) / D
        mats.append(M)
        offsets.append(M @ p)
    low = min(b.min() for b in offsets)
    rho = graph_diagonal_operator(p, graph, frame)
    if low >= -1e-12:
        return _trivial_solution(rho, partitions, [float(b.min()) for b in offsets], "reduced")

    c = np.ones(D)
    blocks = [LpBlock(np.zeros(D), np.eye(D))]
    for M, b in zip(mats, offsets):
        blocks.append(LpBlock(b, M))
    x0 = np.full(D, 0.5 + 2.0 * max(0.0, -low))
    res = solve_conic(c, blocks, x0, gap_tol=gap_tol, max_iter=max_iter)
    q = np.maximum(res.x, 0.0)
    sigma = graph_diagonal_operator(q, graph, frame)
    multipliers = [
        graph_diagonal_operator(np.maximum(y, 0.0), graph, frame)
        for y in res.duals[1:]
    ]
    return _certify(rho, sigma, partitions, multipliers, "reduced", res.iterations)
