"""Optimal worst-case bounds from generator-only measurement data.

Given the n generator expectations a_i of an n-qubit graph state and the
size |B| of the smaller color class of its two-coloring:

    F_min  = max{0, (sum |a_i| - n + 2) / 2}
    R_Gmin = max{0, 2^|B| (sum |a_i| - n + 2) / 2 - 1}
    LR_Gmin = log2(1 + R_Gmin)
    E_Rmin = max{0, |B| - sum_i H((1 + |a_i|) / 2)}      (H = binary entropy)

``purity_min`` is the worst-case purity over physical states whose cluster
fidelity respects F_min: the quadratic program

    min sum_j p_j^2   s.t.  p >= 0, sum p = 1, p_0 >= F_min

whose optimum puts p_0 at the fidelity bound and spreads the remainder
uniformly.  Every state compatible with the generator data is feasible here,
so this is a valid lower bound on its purity; the solution is certified by
an explicit KKT residual.

Error bars come from Monte-Carlo resampling of the a_i (clipped normal),
because the bounds are nonsmooth at their max{0, .} kinks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .reconstruct import state_p


def _abs_a(a) -> np.ndarray:
    a = np.abs(np.asarray(a, dtype=float))
    if a.ndim != 1 or a.size == 0:
        raise ValueError("expected a nonempty vector of generator expectations")
    if a.max() > 1.0 + 1e-12:
        raise ValueError(f"generator expectation magnitude {a.max()} exceeds 1")
    return np.minimum(a, 1.0)


@dataclass(frozen=True)
class GeneratorData:
    """Generator expectations a_i with their one-sigma uncertainties."""

    a: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        s = np.asarray(self.sigma, dtype=float)
        if a.shape != s.shape or a.ndim != 1:
            raise ValueError("a and sigma must be equal-length vectors")
        if (np.abs(a) > 1).any() or (s < 0).any():
            raise ValueError("need |a_i| <= 1 and sigma_i >= 0")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "sigma", s)

    @property
    def n(self) -> int:
        return self.a.size


def fidelity_min(a) -> float:
    """Optimal worst-case fidelity from generator expectations alone."""
    a = _abs_a(a)
    return max(0.0, (a.sum() - a.size + 2.0) / 2.0)


def robustness_min(a, b_size: int) -> float:
    """Worst-case global-robustness bound; b_size from two_coloring."""
    a = _abs_a(a)
    return max(0.0, 2.0 ** b_size * (a.sum() - a.size + 2.0) / 2.0 - 1.0)


def log_robustness(r: float) -> float:
    """log2(1 + r) for r >= 0."""
    if r < 0:
        raise ValueError("robustness must be nonnegative")
    return float(np.log2(1.0 + r))


def _binary_entropy(p):
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    inside = (p > 0) & (p < 1)
    q = p[inside]
    out[inside] = -q * np.log2(q) - (1 - q) * np.log2(1 - q)
    return out


def rel_entropy_min(a, b_size: int) -> float:
    """Worst-case relative-entropy-of-entanglement bound from generators."""
    a = _abs_a(a)
    return max(0.0, b_size - _binary_entropy((1.0 + a) / 2.0).sum())


def er_lower_from_state(state, b_size: int) -> float:
    """Relative-entropy bound |B| - S(p) for a physical graph-diagonal state."""
    p = state_p(state)
    nz = p[p > 0]
    return max(0.0, b_size - float(-(nz * np.log2(nz)).sum()))


@dataclass(frozen=True)
class PurityQpSolution:
    value: float
    p: np.ndarray
    kkt_residual: float


def purity_min_solution(a, n: int | None = None) -> PurityQpSolution:
    """Solve the worst-case purity QP and certify its KKT conditions.

    The minimizer is p_0 = max(F_min, 2^-n) with the remaining mass uniform;
    the returned residual is the largest violation among stationarity,
    feasibility and complementary slackness of the QP.
    """
    a = _abs_a(a)
    if n is None:
        n = a.size
    dim = 1 << n
    f = max(fidelity_min(a), 1.0 / dim)
    rest = (1.0 - f) / (dim - 1)
    p = np.full(dim, rest)
    p[0] = f
    # KKT of min p'p s.t. sum p = 1 (mult mu), p0 >= f (mult lam >= 0), p >= 0:
    #   2 p_j = mu            (j > 0, p_j > 0)
    #   2 p_0 = mu + lam
    mu = 2.0 * rest
    lam = 2.0 * f - mu
    res = max(
        abs(p.sum() - 1.0),
        max(0.0, f - p[0]),
        max(0.0, -lam),
        abs(lam * (p[0] - f)),
        float(np.max(np.abs(2.0 * p[1:] - mu))) if dim > 1 else 0.0,
    )
    return PurityQpSolution(value=float(np.dot(p, p)), p=p, kkt_residual=res)


def purity_min(a, n: int | None = None) -> float:
    """Worst-case purity consistent with the generator measurements."""
    return purity_min_solution(a, n=n).value


# ----------------------------------------------------------------------
# Monte-Carlo error propagation.


def propagate_errors(bound_fn, a, sigma, trials: int = 10_000, seed: int = 0):
    """Mean and std of bound_fn over a_i' ~ N(a_i, sigma_i) clipped to [-1, 1]."""
    if trials < 1000:
        raise ValueError("use at least 1000 trials")
    a = np.asarray(a, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    rng = np.random.default_rng(seed)
    samples = np.clip(rng.normal(a, sigma, size=(trials, a.size)), -1.0, 1.0)
    vals = np.array([bound_fn(s) for s in samples])
    return {"mean": float(vals.mean()), "std": float(vals.std())}


@dataclass(frozen=True)
class BoundValue:
    value: float
    sigma: float

    def to_json_dict(self, provenance: str = "generator-bound") -> dict:
        return {"value": self.value, "sigma": self.sigma, "provenance": provenance}


@dataclass(frozen=True)
class BoundReport:
    """All generator-only bounds with Monte-Carlo error bars."""

    f_min: BoundValue
    p_min: BoundValue
    rg_min: BoundValue
    lrg_min: BoundValue
    er_min: BoundValue

    def to_json_dict(self) -> dict:
        return {
            name: getattr(self, name).to_json_dict()
            for name in ("f_min", "p_min", "rg_min", "lrg_min", "er_min")
        }


def bound_report(
    data: GeneratorData, b_size: int, trials: int = 10_000, seed: int = 0
) -> BoundReport:
    """Evaluate all bounds at the measured a and attach Monte-Carlo sigmas.

    One shared sample set keeps the derived quantities (e.g. lrg vs rg)
    mutually consistent.
    """
    rng = np.random.default_rng(seed)
    samples = np.clip(
        rng.normal(data.a, data.sigma, size=(trials, data.n)), -1.0, 1.0
    )
    fs = np.array([fidelity_min(s) for s in samples])
    ps = np.array([purity_min(s) for s in samples])
    rs = np.array([robustness_min(s, b_size) for s in samples])
    es = np.array([rel_entropy_min(s, b_size) for s in samples])
    ls = np.log2(1.0 + rs)
    rg = robustness_min(data.a, b_size)
    return BoundReport(
        f_min=BoundValue(fidelity_min(data.a), float(fs.std())),
        p_min=BoundValue(purity_min(data.a), float(ps.std())),
        rg_min=BoundValue(rg, float(rs.std())),
        lrg_min=BoundValue(log_robustness(rg), float(ls.std())),
        er_min=BoundValue(rel_entropy_min(data.a, b_size), float(es.std())),
    )
